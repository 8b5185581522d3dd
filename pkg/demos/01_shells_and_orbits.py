"""Lattice shells, their sizes, and orbit representatives under Aut(Z^n)."""
import numpy as np

from shellcodes import ShellId, aut_orbit_reps, enumerate_shell, shell_size
from shellcodes.shellgeom import aut_orbit_size, canonical_form, max_pairwise_inner

# the shell s_4 of Z^6: every integer vector of squared norm 4
shell = ShellId(6, 4)
vs = enumerate_shell(shell)
print(shell, "has", len(vs), "vectors; the counting recursion says", shell_size(shell))
print("first and last in lexicographic order:", vs[0], vs[-1])

# up to signed permutations, a vector is its sorted absolute values
print("canonical form of (0,-2,1,0,-1,1):", canonical_form((0, -2, 1, 0, -1, 1)))

# orbit representatives are partitions of k into at most n squares,
# so they come without touching the shell itself
for rep in aut_orbit_reps(ShellId(10, 9)):
    print("  s_9 in Z^10 rep", rep, "orbit size", aut_orbit_size(rep))

# largest shells in the tables are still fine to count
for n, k in [(8, 15), (12, 14), (16, 10)]:
    print(f"|s_{k}| in Z^{n} = {shell_size(ShellId(n, k))}")

# the whole shell s_4 of Z^6 is far from a code with inner products <= 2
print("max inner product inside s_4:", max_pairwise_inner(vs))
print("norms all 4:", bool((np.einsum("ij,ij->i", vs, vs) == 4).all()))
