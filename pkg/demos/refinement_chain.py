"""Refinement chains on two small transition systems.

Prints every stage of the descending chain for a system with one a-step
against a deadlocked state, then the a.(b + c) versus a.b + a.c pair, where
the terminal-sequence relations separate the two roots one level after the
chain starts.
"""
from coalg.corpus import deadlock_vs_step, milner_abc
from coalg.sequences import greatest_fixpoint, terminal_relations


def show(title, P):
    print(f"== {title}")
    chain = greatest_fixpoint(P)
    for n, R in enumerate(chain.steps):
        print(f"  R_{n}: {sorted(R.pairs)}")
    print(f"  converged after {chain.steps_to_converge} applications")
    for n, W in enumerate(terminal_relations(P, chain.steps_to_converge)):
        print(f"  W_{n}: {len(W)} pairs, same as R_{n}: {W == chain.stage(n)}")


if __name__ == "__main__":
    show("one step against deadlock", deadlock_vs_step())
    show("a.(b+c) against a.b + a.c", milner_abc())
