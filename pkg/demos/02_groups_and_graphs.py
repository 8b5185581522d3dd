"""Signed permutation groups, shell orbits, and the orbit compatibility graph."""
from shellcodes import ShellId, build_graph, builtin_family, partition_orbits
from shellcodes.symgroup import full_group, to_degree_2n_perm

# the negacyclic shift x_i -> x_{i+1}, x_n -> -x_1 generates a group of order 2n
g = builtin_family("s", 6, 0, "negacyclic")
print(g.name, "order", g.order(), "transitive on coordinate/sign pairs:", g.is_transitive_on_pairs())
print("generator:", g.generators[0])
print("as a permutation of 12 points (0-based):", to_degree_2n_perm(g.generators[0]))

# Schreier-Sims gives group orders without listing elements
print("Aut(Z^8) order:", full_group(8).order())
print("AGL(3,2) acting on 8 coordinates:", builtin_family("p", 8, 0, "affine2").order())

# the shell splits into orbits; those whose own members are already within t become vertices
table = partition_orbits(ShellId(6, 4), g)
print(len(table), "orbits of sizes", sorted(table.sizes().tolist(), reverse=True))
graph = build_graph(table, 2)
print("graph for t=2:", len(graph), "vertices,", graph.edge_count, "edges")
for v in graph.vertices[:5]:
    print("  orbit", v.orbit_index, "rep", v.representative, "weight", v.weight)

# the same graph can be handed to other clique solvers
print(graph.to_dimacs().splitlines()[:4])
