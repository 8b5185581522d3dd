"""Shell codes as spherical codes, and unions of shells under one cosine bound."""
from fractions import Fraction
from pathlib import Path

import shellcodes
from shellcodes import CodeSpec, ShellId, SolveBudget, builtin_family, union_scaled
from shellcodes.assembler import read_witness, to_spherical
from shellcodes.errors import CosineExceeded
from shellcodes.pipeline import search_next_shell, search_with_group
from shellcodes.symgroup import full_group

# vectors of s_7 with inner products <= 5 are unit vectors with cosines <= 5/7
c87 = search_with_group(CodeSpec(ShellId(8, 7), 5), builtin_family("s", 8, 0, "affine2*pm"),
                        SolveBudget(time_limit=10)).code
sc = to_spherical(c87)
print(f"({sc.n},{sc.N},{sc.max_cosine})")

# two shells at once: cosines across s_10 and s_6 are <x,y>/sqrt(60), compared exactly
a = search_with_group(CodeSpec(ShellId(6, 10), 8), builtin_family("s", 6, 0, "negacyclic"),
                      SolveBudget(time_limit=5)).code
b = search_with_group(CodeSpec(ShellId(6, 6), 4), builtin_family("s", 6, 0, "negacyclic"),
                      SolveBudget(time_limit=5)).code
try:
    union_scaled([a, b], Fraction(4, 5))
except CosineExceeded as exc:
    print("violating pair:", exc.pair, "cosine", exc.cosine)

# better: search s_6 again, offering the clique solver only orbits that fit next to a
b2 = search_next_shell(CodeSpec(ShellId(6, 6), 4), full_group(6), [a], "4/5",
                       SolveBudget(time_limit=10)).code
out = union_scaled([a, b2], Fraction(4, 5))
print(f"joined: {len(a)} + {len(b2)} -> ({out.n},{out.N},{out.max_cosine})")

# the shipped pair reaches 568 points
data = Path(shellcodes.__file__).parent / "data" / "unions"
parts = [read_witness(data / "n6_t8_k10.txt"), read_witness(data / "n6_t4_k6.txt")]
out = union_scaled(parts, Fraction(4, 5))
print(f"shipped: ({out.n},{out.N},{out.max_cosine})")
