"""Rebuild a target distribution from uniform with a chain of Jeffrey updates."""

from beliefchange import Language, ProbFunction, jeffrey_path, uniform
from beliefchange.prob import apply_path


def main():
    lang = Language.of("p", "q")
    source = uniform(lang)
    target = ProbFunction.from_dict(lang, {0: "2/5", 1: "1/2", 2: "1/10"})
    steps = jeffrey_path(source, target)
    P = source
    print(f"start   {P}")
    for k, step in enumerate(steps, 1):
        P = step.apply(P)
        print(f"step {k}  jeffrey {step.event} : {step.weight}  ->  {P}")
    assert apply_path(source, steps) == target
    print(f"{len(steps)} steps reach the target exactly")


if __name__ == "__main__":
    main()
