"""The shipped bound catalog rendered as a table, with every witness re-verified."""
from shellcodes import read_catalog
from shellcodes.assembler import render_catalog
from shellcodes.pipeline import shipped_catalog_path

records = read_catalog(shipped_catalog_path())  # checks each witness file
print(len(records), "records, all witnesses verified")
print(render_catalog(records, 6))

proven = [r for r in records if r.proven_optimal]
print(len(proven), "cells are optimal for the group that produced them")
