import random
from fractions import Fraction

import pytest

from lllshift import (
    BoundViolationError,
    FiniteCyclicProduct,
    FreeGroup,
    IntegerLattice,
    ShiftConfig,
    Verdict,
    WindowError,
    avoids,
    build_bad_event,
    build_instance,
    check_instance_bounds,
    compute_ell0,
    compute_n,
    config_for_finite_group,
    config_windowed,
    enumerate_forbidden,
    is_correct,
    is_trapped_at,
    make_pattern,
    select_l,
    solve_moser_tardos,
    threshold_product,
    threshold_product_bounds,
    verify_solution,
    verify_trapping,
)

E_LO_NUM, E_HI_NUM, E_DEN = 2718281828459045, 2718281828459046, 10**15


def z(*xs):
    return tuple((x,) for x in xs)


def oracle_flags(k, dsize, limit):
    """Integer-only certified comparisons of e*f(ell) against 1, ell=1..limit."""
    big = k**dsize
    num_pow, den_pow = 1, 1
    flags = []
    for ell in range(1, limit + 1):
        num_pow *= big - 1
        den_pow *= big
        q_num = num_pow * dsize * dsize * ell * ell
        below = E_HI_NUM * q_num < E_DEN * den_pow
        at_least = E_LO_NUM * q_num >= E_DEN * den_pow
        flags.append((below, at_least))
    return flags


def oracle_ell0(k, dsize, limit):
    flags = oracle_flags(k, dsize, limit)
    last_not_below = max(
        (ell for ell, (below, _) in enumerate(flags, start=1) if not below),
        default=0,
    )
    return last_not_below + 1


class TestThreshold:
    def test_binary_singleton_support(self):
        assert compute_ell0(2, 1) == 8
        assert compute_n(2, 1) == 8

    def test_value_at_eight_is_quarter(self):
        assert threshold_product(2, 1, 8) == Fraction(1, 4)
        lo, hi = threshold_product_bounds(2, 1, 8)
        assert hi < 1

    def test_seven_certified_at_least_one(self):
        assert threshold_product(2, 1, 7) == Fraction(49, 128)
        lo, hi = threshold_product_bounds(2, 1, 7)
        assert lo >= 1

    def test_oracle_scan_to_one_hundred(self):
        assert oracle_ell0(2, 1, 100) == 8

    def test_oracle_scan_wider_support(self):
        # every certified-below point in the scanned range is past ell0
        r = compute_ell0(2, 2)
        assert r == 33
        flags = oracle_flags(2, 2, 2000)
        for ell, (below, _) in enumerate(flags, start=1):
            assert below == (ell >= r)

    @pytest.mark.parametrize(
        "k,dsize,expect",
        [(2, 1, 8), (3, 1, 17), (4, 1, 27), (10, 1, 97), (2, 2, 33), (3, 2, 99),
         (2, 3, 92), (3, 3, 403), (2, 4, 227)],
    )
    def test_frozen_values_match_oracle(self, k, dsize, expect):
        assert compute_ell0(k, dsize) == expect
        assert oracle_ell0(k, dsize, expect + 50) == expect
        assert compute_n(k, dsize) == expect * dsize * dsize

    def test_degenerate_alphabet(self):
        assert compute_ell0(1, 3) == 1
        assert compute_n(1, 3) == 9

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            compute_ell0(0, 1)
        with pytest.raises(ValueError):
            compute_ell0(2, 0)
        with pytest.raises(ValueError):
            threshold_product(2, 1, 0)

    @pytest.mark.parametrize("dsize", [1, 2])
    def test_certification_invariants_across_alphabets(self, dsize):
        for k in range(2, 11):
            r = compute_ell0(k, dsize)
            big = k**dsize
            flags = oracle_flags(k, dsize, r)
            assert flags[r - 1][0]  # f(ell0) certified < 1
            if r > 1:
                assert flags[r - 2][1]  # f(ell0 - 1) certified >= 1
            # one-step decrease ratio certified at ell0
            assert (big - 1) * (r + 1) ** 2 < big * r * r

    @pytest.mark.parametrize("dsize", [1, 2])
    def test_threshold_grows_with_alphabet(self, dsize):
        # larger k shrinks the per-block match probability k^-|D|, so the
        # block-miss factor grows toward 1 and more blocks are needed
        values = [compute_ell0(k, dsize) for k in range(2, 11)]
        assert values == sorted(values)
        assert len(set(values)) > 1


class TestSelectL:
    def test_identity_support_returns_f(self):
        ctx = IntegerLattice(1)
        f = z(0, 3, 7)
        assert select_l(ctx, f, [ctx.identity()]) == f

    def test_line(self):
        ctx = IntegerLattice(1)
        out = select_l(ctx, z(*range(8)), z(0, 1))
        assert set(out) <= set(z(*range(8)))
        assert len(out) >= 2
        # inverse translates pairwise disjoint, re-verified by hand
        blocks = [frozenset({(-l,), (-l + 1,)}) for (l,) in out]
        assert all(a.isdisjoint(b) for a in blocks for b in blocks if a is not b)

    def test_z6_pair(self):
        ctx = FiniteCyclicProduct((6,))
        assert select_l(ctx, z(0, 3), z(0, 1)) == z(0, 3)

    def test_empty_raises(self):
        with pytest.raises(Exception):
            select_l(IntegerLattice(1), (), z(0))


class TestBuildBadEvent:
    def test_single_block(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0, (1,): 1}, 2)
        ev = build_bad_event(ctx, (2,), [(0,)], pat)
        assert ev.domain == z(2, 3)
        assert ev.body.probability == Fraction(3, 4)  # 1 - 2^-2

    def test_z6_two_blocks_enumeration(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0, (1,): 0}, 2)
        ev = build_bad_event(ctx, (0,), [(0,), (3,)], pat)
        assert ev.domain == z(0, 1, 3, 4)
        assert ev.body.count == 9
        assert len(enumerate_forbidden(ev, 2)) == 9

    def test_matching_one_block_escapes(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0, (1,): 0}, 2)
        ev = build_bad_event(ctx, (0,), [(0,), (3,)], pat)
        f = {(0,): 1, (1,): 1, (3,): 0, (4,): 0}  # block at lambda=3 matches
        assert avoids(f, ev) is True

    def test_separation_precondition_enforced(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0, (1,): 0}, 2)
        with pytest.raises(ValueError):
            build_bad_event(ctx, (0,), [(0,), (1,)], pat)

    def test_domain_size_is_product(self):
        ctx = FiniteCyclicProduct((12,))
        pat = make_pattern(ctx, {(0,): 1, (1,): 0}, 2)
        ev = build_bad_event(ctx, (5,), [(0,), (4,), (8,)], pat)
        assert len(ev.domain) == 6
        assert ev.body.probability == Fraction(27, 64)


def z100_built():
    ctx = FiniteCyclicProduct((100,))
    pat = make_pattern(ctx, {(0,): 0}, 2)
    cfg = config_for_finite_group(ctx, pat, z(*range(8)))
    return build_instance(cfg)


class TestBuildInstance:
    def test_empty_core_window(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        cfg = ShiftConfig(ctx, pat, z(0, 1), (), ctx.elements())
        built = build_instance(cfg)
        assert len(built.instance.events) == 0
        assert is_correct(built.instance) is Verdict.CORRECT

    def test_cyclic_hundred(self):
        built = z100_built()
        inst = built.instance
        assert len(inst.events) == 100
        assert all(len(ev.domain) == 8 for ev in inst.events)
        assert inst.p == Fraction(1, 256)
        assert set(inst.degrees) == {14}
        assert built.translates == z(*range(8))
        assert built.ell0 == 8 and built.n == 8

    def test_line_window(self):
        ctx = IntegerLattice(1)
        pat = make_pattern(ctx, {(0,): 0}, 2)
        cfg = config_windowed(ctx, pat, z(*range(8)), 24, 32)
        built = build_instance(cfg)
        assert len(built.instance.events) == 49
        u = set(cfg.universe)
        assert all(set(ev.domain) <= u for ev in built.instance.events)

    def test_default_universe_radius_fits_all_domains(self):
        ctx = IntegerLattice(1)
        pat = make_pattern(ctx, {(0,): 0, (1,): 1}, 2)
        cfg = config_windowed(ctx, pat, z(*range(12)), 5)
        built = build_instance(cfg)
        u = set(cfg.universe)
        assert all(set(ev.domain) <= u for ev in built.instance.events)

    def test_universe_too_small(self):
        ctx = IntegerLattice(1)
        pat = make_pattern(ctx, {(0,): 0}, 2)
        cfg = ShiftConfig(ctx, pat, z(*range(8)), ctx.ball(24), ctx.ball(24))
        with pytest.raises(WindowError):
            build_instance(cfg)

    def test_free_group_window(self):
        ctx = FreeGroup(2)
        pat = make_pattern(ctx, {(): 0}, 2)
        f = ctx.ball(2)  # 17 translates, all usable since |D| = 1
        cfg = config_windowed(ctx, pat, f, 2)
        built = build_instance(cfg)
        assert len(built.instance.events) == 17
        assert len(built.translates) == 17
        assert is_correct(built.instance) is Verdict.CORRECT

    def test_explicit_l_must_be_subset(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        with pytest.raises(ValueError):
            config_for_finite_group(ctx, pat, z(0, 1), l_override=z(4))


class TestInstanceBounds:
    def test_cyclic_hundred_report(self):
        built = z100_built()
        report = check_instance_bounds(built)
        assert report.max_degree == 14
        assert report.degree_bound == 63
        assert report.closed_form_probability == Fraction(1, 256)
        assert report.hypothesis_met
        assert report.verdict is Verdict.CORRECT
        assert report.product_hi < 1
        assert report.warnings == ()

    def test_undersized_l_flags_warning(self):
        ctx = FiniteCyclicProduct((20,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        cfg = config_for_finite_group(ctx, pat, z(0, 5, 10), l_override=z(0, 5, 10))
        built = build_instance(cfg)
        report = check_instance_bounds(built)
        assert not report.hypothesis_met
        assert any("ell0" in w for w in report.warnings)
        assert report.max_degree <= report.degree_bound

    def test_empty_instance_vacuous(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        cfg = ShiftConfig(ctx, pat, z(0), (), ctx.elements(), l_override=z(0))
        report = check_instance_bounds(build_instance(cfg))
        assert report.event_count == 0

    def test_degree_bound_tight_case(self):
        # |D| = |L| = 1: bound 0, domains are singletons, all distinct
        ctx = FiniteCyclicProduct((12,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        cfg = config_for_finite_group(ctx, pat, z(3), l_override=z(3))
        built = build_instance(cfg)
        report = check_instance_bounds(built)
        assert report.degree_bound == 0
        assert report.max_degree == 0


class TestTrapping:
    def test_witness_at_identity(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 1, (1,): 0}, 2)
        x = {e: 0 for e in ctx.elements()}
        x[(0,)] = 1
        assert is_trapped_at(ctx, x, (0,), [(0,)], pat) == (0,)

    def test_all_ones_untrapped(self):
        ctx = FiniteCyclicProduct((12,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        x = {e: 1 for e in ctx.elements()}
        for gamma in ctx.elements():
            assert is_trapped_at(ctx, x, gamma, z(*range(8)), pat) is None

    def test_window_too_small(self):
        ctx = IntegerLattice(1)
        pat = make_pattern(ctx, {(0,): 0}, 2)
        x = {(0,): 0}
        with pytest.raises(WindowError):
            is_trapped_at(ctx, x, (0,), z(5), pat)

    def test_solution_traps_everything(self):
        built = z100_built()
        cfg = built.config
        result = solve_moser_tardos(built.instance, seed=12, max_resamples=10**5)
        assert result.success
        report = verify_trapping(
            cfg.ctx,
            result.assignment,
            built.translates,
            cfg.pattern,
            cfg.core_window,
            instance=built.instance,
        )
        assert report.all_trapped
        assert report.total == 100

    def test_corrupted_solution_loses_trapping_and_violates(self):
        built = z100_built()
        cfg = built.config
        result = solve_moser_tardos(built.instance, seed=4, max_resamples=10**5)
        corrupted = dict(result.assignment)
        gamma = (37,)
        for off in range(8):  # break every block of the event at gamma
            corrupted[((37 - off) % 100,)] = 1
        assert is_trapped_at(cfg.ctx, corrupted, gamma, built.translates, cfg.pattern) is None
        idx = cfg.core_window.index(gamma)
        assert idx in verify_solution(built.instance, corrupted)

    def test_empty_core_window_trivially_trapped(self):
        ctx = FiniteCyclicProduct((6,))
        pat = make_pattern(ctx, {(0,): 0}, 2)
        report = verify_trapping(ctx, {}, z(0), pat, ())
        assert report.all_trapped and report.total == 0

    def test_trapped_iff_avoids_on_random_assignments(self):
        rnd = random.Random(55)
        ctx = FiniteCyclicProduct((30,))
        pat = make_pattern(ctx, {(0,): 1, (7,): 0}, 2)
        cfg = config_for_finite_group(ctx, pat, z(*range(0, 30, 3)))
        built = build_instance(cfg)
        for _ in range(10):
            x = {e: rnd.randrange(2) for e in ctx.elements()}
            violated = set(verify_solution(built.instance, x))
            for i, gamma in enumerate(cfg.core_window):
                witness = is_trapped_at(ctx, x, gamma, built.translates, cfg.pattern)
                assert (witness is None) == (i in violated)
