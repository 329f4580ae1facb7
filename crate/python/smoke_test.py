"""Smoke test for the `kwise` extension module.

Build and install first:  pip install --no-build-isolation ./crates/py
"""

import kwise


def main():
    for k, n in [(3, 8), (4, 9), (5, 12)]:
        f = kwise.construct(k, n)
        assert len(f) == kwise.expected_size(k, n), (k, n, len(f))
        v = kwise.is_maximal_kwise(f, k, backend="both")
        assert v.ok and v.failure is None and v.downset, v
        direct = kwise.construct(k, n, world="direct")
        assert kwise.is_maximal_kwise(direct, k, world="direct")
        assert direct == f.complement()

    f = kwise.construct(4, 9)
    assert kwise.Family.parse(f.to_text()) == f
    assert kwise.Family.from_masks(9, f.masks()) == f
    assert [] in f and [1, 2, 3, 4, 5, 6, 7, 8, 9] not in f
    assert kwise.partition(4, 9) == [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert kwise.cube_distance(f, 4)[0] == 15

    bad = kwise.Family(4, [[1, 2, 3, 4]])
    v = kwise.check_kwise(bad, 3)
    assert not v and v.failure == "not_kwise" and v.witness[0] == "cover"
    gap = kwise.check_saturated(kwise.Family(4, [[]]), 3)
    assert gap.failure == "not_saturated" and gap.witness[0] == "gap"

    size, extremal, maximal, sample = kwise.oracle_min_size(2, 4)
    assert (size, maximal) == (8, 12), (size, maximal)
    assert kwise.oracle_min_size(3, 4)[:2] == (5, 1)

    g1 = kwise.greedy_saturate(3, 8, seed=7)
    g2 = kwise.greedy_saturate(3, 8, seed=7)
    assert g1 == g2 and kwise.is_maximal_kwise(g1, 3)
    assert kwise.greedy_saturate(4, 9, seed=1, start=f) == f

    try:
        kwise.construct(2, 8)
    except ValueError:
        pass
    else:
        raise AssertionError("k=2 should be rejected")

    print("kwise smoke test: ok")


if __name__ == "__main__":
    main()
