"""Reproduce Sh(6,2,4) >= 60 and Sh(8,2,4) >= 240 by prescribing automorphisms."""
from shellcodes import CodeSpec, ShellId, SolveBudget, builtin_family, verify_shell_code
from shellcodes.pipeline import family_sweep, search, search_with_group
from shellcodes.symgroup import full_group

spec = CodeSpec(ShellId(6, 4), 2)

# with the full group the problem collapses to a handful of orbits and the answer is poor
poor = search_with_group(spec, full_group(6))
print("full group:", poor.size, poor.status)

# a smaller group leaves room for a better union of orbits
good = search_with_group(spec, builtin_family("s", 6, 0, "negacyclic"))
print("negacyclic:", good.size, good.status, good.stats)
print(verify_shell_code(good.code).summary())

# sweep the shipped family list for dimension 8 and stop at the table value
best, outcomes = search(CodeSpec(ShellId(8, 4), 2), family_sweep(8), SolveBudget(time_limit=5), target=240)
print("dimension 8:", best.size, "from", best.group.name, "after", len(outcomes), "groups")
