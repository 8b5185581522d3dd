"""Integer orthogonal matrices and rational codes moved into integer shells."""
from fractions import Fraction

from shellcodes import (CodeSpec, ShellId, builtin_family, builtin_orthogonal, embed_scale,
                        rational_embed, verify_shell_code)
from shellcodes.assembler import to_spherical
from shellcodes.pipeline import search_with_group

# an 18-vector code in s_5 of Z^6 with t = 1
small = search_with_group(CodeSpec(ShellId(6, 5), 1), builtin_family("s", 6, 2, "affine2*rm1")).code
print("s_5 code:", len(small), "vectors")

# Q Q^T = 2I maps s_5 into s_10 and doubles every inner product
q = builtin_orthogonal(2, 6)
print(q.array())
big = embed_scale(small, q)
print("image:", big.spec, verify_shell_code(big).summary())

# a regular simplex has rational cosines -1/m; it fits into some integer shell exactly
for m in (2, 3, 5):
    gram = [[1 if i == j else Fraction(-1, m) for j in range(m + 1)] for i in range(m + 1)]
    code = rational_embed(gram=gram)
    sc = to_spherical(code)
    print(f"simplex on {m + 1} points -> Z^{code.spec.n}, k={code.spec.k}, max cosine {sc.max_cosine}")
