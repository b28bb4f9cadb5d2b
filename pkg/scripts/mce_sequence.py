"""Sequential minimum cross-entropy updates and the preservation failure over sets."""

from beliefchange import ConstraintSet, Language, PartialModel, mce_preservation_witness, mce_update, uniform


def main():
    lang = Language.of("p", "q")
    phi = ConstraintSet.parse(lang, ["P(p&q) = 1/2"])
    psi = ConstraintSet.parse(lang, ["P(p) = 1/2"])
    first = mce_update(uniform(lang), phi)
    second = mce_update(first.result, psi)
    print("after phi:", [round(x, 12) for x in first.result], f"I = {first.objective:.6f} nats")
    print("after psi:", [round(x, 12) for x in second.result], f"I = {second.objective:.6f} nats")
    w = mce_preservation_witness(PartialModel.ignorant(lang), phi, psi)
    if w is None:
        print("no witness found")
    else:
        print(f"witness start {w.start}: P(p&q) ends at {w.after_second.prob(0b0001):.6f}, violation {w.violation:.6f}")


if __name__ == "__main__":
    main()
