"""Search two-letter models for extended conditioning that raises average ignorance.

Each candidate pins the masses of two disjoint events to multiples of 1/10
and leaves the rest free; the evidence ranges over the four literals.
"""

from fractions import Fraction
from itertools import combinations, product

from beliefchange import ConstraintSet, Language, NullEvidenceError, PartialModel, condition_extended
from beliefchange.logic import iter_atoms
from beliefchange.lprob import feasible
from beliefchange.measures import ignorance_exact


def candidates(lang, step=Fraction(1, 10)):
    grid = [k * step for k in range(int(1 / step) + 1)]
    for events in combinations(range(1, lang.full + 1), 2):
        if events[0] & events[1]:
            continue
        for values in product(grid, repeat=2):
            S = ConstraintSet.parse(lang, [f"P({'|'.join(map(lang.atom_label, iter_atoms(e)))}) = {v}" for e, v in zip(events, values)])
            if feasible(S):
                yield S


def main():
    lang = Language.of("p", "q")
    best = None
    for S in candidates(lang):
        M = PartialModel(S)
        before = ignorance_exact(M)
        for evidence in ("p", "!p", "q", "!q"):
            try:
                after = ignorance_exact(condition_extended(M, evidence))
            except NullEvidenceError:
                continue
            gain = after - before
            if best is None or gain > best[0]:
                best = (gain, S, evidence, before, after)
    gain, S, evidence, before, after = best
    print("largest increase:", gain)
    print("model:", "; ".join(str(c) for c in S), "| evidence:", evidence, "| before", before, "after", after)


if __name__ == "__main__":
    main()
