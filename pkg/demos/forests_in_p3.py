"""Two curves in P^3 with the same Hilbert polynomial and degree sequence.

The forest tells them apart: two pairs of crossing lines give two trees with
two leaves each, a line next to three concurrent lines gives trees with one
and three leaves.
"""

from branchlim.decompose import degree_sequence
from branchlim.fixtures import line_and_three_lines, quartic_surface, two_crossing_pairs
from branchlim.forest import compute_forest

if __name__ == "__main__":
    for name, X in (("two crossing pairs", two_crossing_pairs()), ("line and three lines", line_and_three_lines())):
        print(f"{name}:")
        print("  h(d) coefficients:", [str(c) for c in X.hilbert().polynomial])
        print("  degree sequence:  ", degree_sequence(X.ideal))
        print("  forest:           ", compute_forest(X))
    print("quartic surface forest:", compute_forest(quartic_surface()))
