"""Instance builders shared by the test modules."""

from hypothesis import strategies as st

from stablefair.instance import Instance, parse_instance

TWO_BY_TWO = "2\n2\n1 2\n1 2\n2 1\n1 2"


def two_by_two() -> Instance:
    # m1: w1 w2, m2: w1 w2, w1: m2 m1, w2: m1 m2
    return parse_instance(TWO_BY_TWO)


def mutual_first(n: int) -> Instance:
    """m_i and w_i rank each other first; the rest of each list is cyclic."""
    men = [[(i + k) % n for k in range(n)] for i in range(n)]
    women = [[(i + k) % n for k in range(n)] for i in range(n)]
    return Instance(men, women)


def cyclic3() -> Instance:
    """m_i ranks w_i first (then cyclically); every woman's list is reversed."""
    men = [[(i + k) % 3 for k in range(3)] for i in range(3)]
    women = [[2, 1, 0] for _ in range(3)]
    return Instance(men, women)


@st.composite
def smi_instances(draw, max_n=6, complete=False):
    """Random SMI instance with possibly unequal sides and incomplete lists."""
    n_men = draw(st.integers(1, max_n))
    n_women = n_men if complete else draw(st.integers(1, max_n))
    men = []
    for _ in range(n_men):
        perm = draw(st.permutations(range(n_women)))
        k = n_women if complete else draw(st.integers(0, n_women))
        men.append(list(perm[:k]))
    women = []
    for _ in range(n_women):
        perm = draw(st.permutations(range(n_men)))
        k = n_men if complete else draw(st.integers(0, n_men))
        women.append(list(perm[:k]))
    return Instance(men, women)
