"""Generic versus specific evidence on the three-suspects puzzle."""

from beliefchange import ConstraintSet, InconsistentError, Language, PartialModel
from beliefchange import as_constraints, condition_extended, constrain, lower, maxent, upper


def envelope(M, s):
    return f"[{lower(M, s)}, {upper(M, s)}]"


def main():
    lang = Language.of("p", "q", "r")
    prior = PartialModel(
        ConstraintSet.parse(lang, ["P(p|q|r) = 1", "P(p&q|p&r|q&r) = 0", "P(r) = 1/2"])
    )
    print("maxent member:", [round(x, 12) for x in maxent(prior.base).result])
    amp = constrain(prior, "!p")
    cond = condition_extended(prior, "!p")
    print("constrain !p:  q", envelope(amp, "q"), " r", envelope(amp, "r"))
    print("condition !p:  q", envelope(cond, "q"), " r", envelope(cond, "r"))

    fair = constrain(prior, "P(p) = P(q)")
    print("prior + P(p)=P(q), then condition !p:  q", envelope(condition_extended(fair, "!p"), "q"))
    late = constrain(PartialModel(as_constraints(cond)), "P(p) = P(q)")
    print("condition !p, then P(p)=P(q):  r", envelope(late, "r"))
    try:
        constrain(amp, "P(p) = P(q)")
    except InconsistentError as exc:
        print("constrain !p, then P(p)=P(q):", exc)


if __name__ == "__main__":
    main()
