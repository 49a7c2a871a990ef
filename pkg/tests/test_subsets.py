import pytest
from hypothesis import given
from hypothesis import strategies as st

from smdc.subsets import EncoderSet, subsets_of_size, window, windows


def members(sets):
    return [s.members for s in sets]


class TestSubsetsOfSize:
    def test_three_choose_two(self):
        assert members(subsets_of_size(3, 2)) == [(1, 2), (1, 3), (2, 3)]

    def test_full_set(self):
        assert members(subsets_of_size(3, 3)) == [(1, 2, 3)]

    def test_counts(self):
        assert len(subsets_of_size(5, 2)) == 10

    def test_lexicographic(self):
        got = members(subsets_of_size(6, 3))
        assert got == sorted(got)
        assert len(set(got)) == len(got)

    @pytest.mark.parametrize("L,a", [(0, 1), (3, 0), (3, 4), (25, 2)])
    def test_range_errors(self, L, a):
        with pytest.raises(ValueError):
            subsets_of_size(L, a)


class TestWindow:
    def test_wraparound(self):
        assert window(3, 2, 3).members == (1, 3)

    def test_singleton(self):
        assert window(1, 1, 4).members == (1,)

    def test_full_window(self):
        assert window(2, 4, 4).members == (1, 2, 3, 4)

    def test_distinct_below_full_length(self):
        for L in range(2, 9):
            for a in range(1, L):
                ws = windows(L, a)
                assert len({w.members for w in ws}) == L

    def test_full_length_all_equal(self):
        for L in range(1, 9):
            ws = windows(L, L)
            assert all(w.members == tuple(range(1, L + 1)) for w in ws)

    def test_two_children_inside_window_family(self):
        # each window of length 2..L-1 has exactly two children that are
        # themselves windows: same start, and start shifted by one
        for L in range(3, 8):
            for a in range(2, L):
                smaller = {w.members for w in windows(L, a - 1)}
                for l in range(1, L + 1):
                    u = window(l, a, L)
                    in_family = [
                        c.members for c in u.children() if c.members in smaller
                    ]
                    expected = {
                        window(l, a - 1, L).members,
                        window(l % L + 1, a - 1, L).members,
                    }
                    assert set(in_family) == expected
                    assert len(in_family) == 2


class TestParentsChildren:
    def test_children_example(self):
        u = EncoderSet((1, 2, 3), 3)
        assert members(u.children()) == [(1, 2), (1, 3), (2, 3)]

    def test_children_pair(self):
        u = EncoderSet((2, 4), 5)
        assert members(u.children()) == [(2,), (4,)]

    def test_children_count(self):
        for a in range(2, 6):
            u = EncoderSet(tuple(range(1, a + 1)), 8)
            assert len(u.children()) == a

    def test_parents_examples(self):
        v = EncoderSet((1,), 3)
        assert members(v.parents()) == [(1, 2), (1, 3)]
        v = EncoderSet((1, 2), 3)
        assert members(v.parents()) == [(1, 2, 3)]

    def test_parents_count(self):
        L = 7
        for a in range(2, L + 1):
            v = EncoderSet(tuple(range(1, a)), L)
            assert len(v.parents()) == L - (a - 1)

    def test_size_errors(self):
        with pytest.raises(ValueError):
            EncoderSet((1,), 3).children()
        with pytest.raises(ValueError):
            EncoderSet((1, 2, 3), 3).parents()

    def test_duality_exhaustive(self):
        L = 5
        for a in range(2, L + 1):
            for u in subsets_of_size(L, a):
                for v in u.children():
                    assert u in v.parents()
        for a in range(1, L):
            for v in subsets_of_size(L, a):
                for u in v.parents():
                    assert v in u.children()


class TestEncoderSet:
    def test_validation(self):
        with pytest.raises(ValueError):
            EncoderSet((2, 1), 3)
        with pytest.raises(ValueError):
            EncoderSet((1, 1), 3)
        with pytest.raises(ValueError):
            EncoderSet((4,), 3)

    def test_membership_and_complement(self):
        u = EncoderSet.of([3, 1], 4)
        assert u.members == (1, 3)
        assert 1 in u and 3 in u and 2 not in u
        assert u.complement().members == (2, 4)

    @given(st.integers(1, 10), st.data())
    def test_mask_matches_members(self, L, data):
        size = data.draw(st.integers(0, L))
        picks = data.draw(
            st.lists(st.integers(1, L), min_size=size, max_size=size, unique=True)
        )
        u = EncoderSet.of(picks, L)
        for e in range(1, L + 1):
            assert (e in u) == (e in picks)
