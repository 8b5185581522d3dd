"""Lower bounds for codes in shells of Z^n via prescribed signed-permutation groups."""
from .assembler import (BoundRecord, IntegerOrthogonalMatrix, ShellCode, SphericalCode, assemble,
                        builtin_orthogonal, embed_scale, rational_embed, read_catalog, read_witness,
                        union_scaled, verify_shell_code, write_witness)
from .cliquesolve import CliqueResult, SolveBudget, brute_force_clique, max_weight_clique
from .orbitgraph import CompatibilityGraph, build_graph
from .shellgeom import CodeSpec, ShellId, aut_orbit_reps, enumerate_shell, shell_size
from .symgroup import GroupSpec, SignedPermutation, builtin_family, partition_orbits

__version__ = "0.1.0"

__all__ = [
    "BoundRecord", "CliqueResult", "CodeSpec", "CompatibilityGraph", "GroupSpec",
    "IntegerOrthogonalMatrix", "ShellCode", "ShellId", "SignedPermutation", "SolveBudget",
    "SphericalCode", "assemble", "aut_orbit_reps", "brute_force_clique", "build_graph",
    "builtin_family", "builtin_orthogonal", "embed_scale", "enumerate_shell", "max_weight_clique",
    "partition_orbits", "rational_embed", "read_catalog", "read_witness", "shell_size",
    "union_scaled", "verify_shell_code", "write_witness",
]
