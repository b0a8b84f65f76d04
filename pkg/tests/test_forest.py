from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from descent_quiver.checks import (
    check_delta_pi,
    check_erase_class,
    check_unique_factorization,
    random_forest,
)
from descent_quiver.forest import (
    Delta,
    FormalSum,
    F_label,
    ParseError,
    alpha,
    branch_act_forest,
    bullet,
    class_key,
    class_product,
    collect_classes,
    delta,
    erase,
    expand,
    foliage,
    format_forest,
    is_aligned,
    is_labeled_forest,
    length,
    nondecreasing_rep,
    orbit,
    parse_forest,
    product,
    sim_closure,
    squash,
    tree_key,
    unique_factorization,
)
from descent_quiver.lie import pi

Y_TEXT = "(1,2)#3 (1,(3,1)#2)#1 (2,1)#4"
X_TEXT = "(3,5)#1 3"


def test_foliage_squash_length_of_example():
    Y = parse_forest(Y_TEXT)
    assert is_labeled_forest(Y)
    assert foliage(Y) == (1, 2, 1, 3, 1, 2, 1)
    assert squash(Y) == (3, 5, 3)
    assert length(Y) == 4
    assert format_forest(Y) == Y_TEXT


def test_bullet_example():
    X, Y = parse_forest(X_TEXT), parse_forest(Y_TEXT)
    Z = bullet(X, Y)
    assert format_forest(Z) == "((1,2)#4,(1,(3,1)#3)#2)#1 (2,1)#5"
    assert bullet(Y, X) is None


def test_factorization_example():
    Z = parse_forest("((1,2)#4,(1,(3,1)#3)#2)#1 (2,1)#5")
    factors = [format_forest(F) for F in unique_factorization(Z)]
    assert factors == [
        "(3,5)#1 3",
        "3 (1,4)#1 3",
        "3 1 (3,1)#1 3",
        "(1,2)#1 1 3 1 3",
        "1 2 1 3 1 (2,1)#1",
    ]
    assert product(unique_factorization(Z)) == Z


def test_labeling_rules_rejected():
    assert not is_labeled_forest(parse_forest("((1,2)#1,3)#2"))
    assert not is_labeled_forest(parse_forest("(1,2)#1 (1,2)#1"))
    with pytest.raises(ParseError):
        parse_forest("(1,2")


def test_unique_factorization_random(rng):
    assert check_unique_factorization(rng, trials=300) == []


def test_delta_equals_pi_of_erasure(rng):
    assert check_delta_pi(rng, trials=300) == []


def test_erase_of_class(rng):
    assert check_erase_class(rng, trials=300) == []


def test_class_example_has_six_terms():
    X = parse_forest("(1,2)#1 (1,2)#2 (1,(1,2)#4)#3")
    assert len(orbit(X)) == 6
    # erasing identifies the first two parts
    assert alpha(X) == 2


def test_delta_single_step():
    X = parse_forest("(1,2)#1 3")
    assert delta(X) == FormalSum({(1, 2, 3): 1, (2, 1, 3): -1})
    assert delta((2, 3)) == FormalSum({(2, 3): 1})


def test_Delta_lands_in_compositions(rng):
    for _ in range(50):
        X = random_forest(rng, 7, 4)
        assert all(all(isinstance(v, int) for v in w) for w in Delta(X))


def test_class_product_matches_sum_over_orbits():
    a = FormalSum({class_key(parse_forest("(1,2)#1 3")): 1})
    b = FormalSum({(1, 2, 3): 1})
    # [(1,2) 3] . [1 2 3]: foliage 1 2 3 matches squash of both 1 2 3 and its
    # rearrangements with equal values at the right spots
    prod = class_product(a, b)
    total = FormalSum()
    for X in orbit(class_key(parse_forest("(1,2)#1 3"))):
        for Y in orbit((1, 2, 3)):
            Z = bullet(X, Y)
            if Z is not None:
                total.add_term(Z, 1)
    assert prod == collect_classes(total)


def test_tree_order():
    # smaller squash first, longer trees first among equal squash
    assert tree_key(2) < tree_key(3)
    assert tree_key((1, 2)) < tree_key(3)
    assert tree_key((1, (1, 2))) < tree_key((1, 3))
    assert nondecreasing_rep((4, (1, 2), 3)) == ((1, 2), 3, 4)


def test_branch_action_on_classes():
    x = FormalSum({(3, 4): 1})
    y = branch_act_forest(x, 1, 2, classes=True, labeled=True)
    assert y == FormalSum({class_key(((1, 1, 2), 4)): 1})


def test_F_label_prefix_order():
    X = (((1, 2), (3, 4)), (1, 5))
    L = F_label(X)
    assert format_forest(L) == "((1,2)#2,(3,4)#3)#1 (1,5)#4"
    assert erase(L) == X
    assert is_labeled_forest(L)


def test_aligned():
    assert is_aligned(((1, (1, 2)), 2))
    assert not is_aligned(((2, 1),))
    assert not is_aligned(((1, 1),))


def test_sim_closure_example():
    related = [
        "(4,((1,2)#4,(1,3)#3)#2)#1",
        "(4,(3,(1,(1,2)#4)#3)#2)#1",
        "((1,3)#3,((1,2)#4,4)#2)#1",
        "((1,(1,2)#4)#3,(3,4)#2)#1",
    ]
    expected = {class_key(parse_forest(t)) for t in related}
    for t in related:
        assert sim_closure(parse_forest(t)) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 8), st.integers(0, 10 ** 6))
def test_expand_collect_roundtrip(n, steps, seed):
    import random
    X = random_forest(random.Random(seed), n, steps)
    assert collect_classes(expand(class_key(X))) == FormalSum({class_key(X): 1})
    assert len(orbit(X)) == len(set(permutations(X)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 8), st.integers(0, 10 ** 6))
def test_Delta_is_pi_of_erase_hypothesis(n, steps, seed):
    import random
    X = random_forest(random.Random(seed), n, steps)
    assert Delta(X) == pi(erase(X))
