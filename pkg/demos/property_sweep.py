"""Sweep the standard functors over the cospan corpus and print a table."""
from coalg.corpus import standard_functors
from coalg.functors import SubDistribution
from coalg.props import functor_profile

SHORT = {"HoldsOnCorpus": "yes", "Counterexample": "NO"}

if __name__ == "__main__":
    functors = dict(standard_functors(), df=SubDistribution())
    profiles = {name: functor_profile(F) for name, F in functors.items()}
    props = list(next(iter(profiles.values())))
    width = max(map(len, props))
    print(" " * width + "".join(f"{name:>8}" for name in functors))
    for prop in props:
        row = "".join(f"{SHORT.get(profiles[n][prop].status, '?'):>8}" for n in functors)
        print(f"{prop:<{width}}{row}")
    w = profiles["p32"]["PreservesWeakPullbacks"].witness
    print("\nP32 weak-pullback witness:", w)
