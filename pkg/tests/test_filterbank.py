import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphfb import (
    Coloring,
    BipartiteDecomposition,
    DecompositionStage,
    Graph,
    GraphSignal,
    KernelSet,
    SeparableBank,
    analysis_operator,
    analyze_separable,
    analyze_two_channel,
    channel_energy_report,
    chebyshev_fit,
    custom_kernel,
    downsampled_graph,
    eigendecompose,
    greedy_coloring,
    harary_decompose,
    ideal_kernel,
    image_graph,
    lattice_parity_coloring,
    make_two_channel_bank,
    meyer_kernel,
    normalized_laplacian,
    qmf_companions,
    stage_orthogonality_residuals,
    synthesize_separable,
    synthesize_two_channel,
    verify_commutation,
    verify_pr_conditions,
)
from graphfb.fixtures import (
    complete_graph,
    cycle_graph,
    path_graph,
    planar_three_colorable,
    quadrant_signal,
    random_connected_bipartite_graph,
)

MEYER = qmf_companions(meyer_kernel())
IDEAL = qmf_companions(ideal_kernel())


def separable_bank(graph, kernels=MEYER, mode="exact", order=None, coloring=None):
    coloring = coloring or greedy_coloring(graph)
    decomp = harary_decompose(graph, coloring)
    return SeparableBank(graph, decomp, kernels, mode, order)


class TestTwoChannel:
    def test_dc_on_unit_degree_graph_has_silent_highpass(self):
        g = path_graph(2)
        bank = make_two_channel_bank(g, IDEAL)
        y_low, y_high = analyze_two_channel(bank, GraphSignal(g, [1.0, 1.0]))
        np.testing.assert_allclose(y_high, 0.0, atol=1e-12)
        assert y_low.shape == (1,) and y_high.shape == (1,)

    def test_zero_signal_gives_zero_subbands(self):
        g = cycle_graph(4)
        bank = make_two_channel_bank(g, MEYER)
        y_low, y_high = analyze_two_channel(bank, GraphSignal(g, np.zeros(4)))
        assert not y_low.any() and not y_high.any()

    def test_output_is_critically_sampled(self, rng):
        g = cycle_graph(4)
        bank = make_two_channel_bank(g, MEYER)
        y_low, y_high = analyze_two_channel(bank, GraphSignal(g, rng.standard_normal(4)))
        assert len(y_low) + len(y_high) == 4

    def test_round_trip_on_cycle4(self, rng):
        g = cycle_graph(4)
        bank = make_two_channel_bank(g, MEYER)
        sig = GraphSignal(g, rng.standard_normal(4))
        rec = synthesize_two_channel(bank, *analyze_two_channel(bank, sig))
        assert np.abs(rec.values - sig.values).max() < 1e-8

    def test_zero_subbands_give_zero_signal(self):
        g = cycle_graph(4)
        bank = make_two_channel_bank(g, MEYER)
        rec = synthesize_two_channel(bank, np.zeros(2), np.zeros(2))
        np.testing.assert_array_equal(rec.values, np.zeros(4))

    def test_subband_length_mismatch_rejected(self):
        bank = make_two_channel_bank(cycle_graph(4), MEYER)
        with pytest.raises(ValueError, match="subband"):
            synthesize_two_channel(bank, np.zeros(3), np.zeros(2))

    def test_non_bipartite_host_rejected(self):
        with pytest.raises(ValueError, match="bipartite"):
            make_two_channel_bank(complete_graph(3), MEYER)

    def test_polynomial_round_trip_bounded_by_kernel_residual(self):
        gen = np.random.default_rng(11)
        g, _ = random_connected_bipartite_graph(50, gen)
        bank = make_two_channel_bank(g, MEYER, mode="polynomial", order=6)
        sig = GraphSignal(g, gen.standard_normal(50))
        rec = synthesize_two_channel(bank, *analyze_two_channel(bank, sig))
        rel = np.linalg.norm(rec.values - sig.values) / np.linalg.norm(sig.values)
        # oracle bound: power-complementarity deviation of the fitted pair on
        # the actual eigenvalues
        poly = chebyshev_fit(meyer_kernel(), 6)
        lam = eigendecompose(normalized_laplacian(g)).eigenvalues
        budget = np.abs(poly(lam) ** 2 + poly(2 - lam) ** 2 - 1.0).max()
        assert 0.0 < rel <= budget + 1e-12

    @given(st.integers(0, 2**31 - 1), st.integers(2, 64))
    @settings(max_examples=30, deadline=None)
    def test_exact_round_trip_on_random_bipartite(self, seed, n):
        gen = np.random.default_rng(seed)
        g, bip = random_connected_bipartite_graph(n, gen)
        bank = make_two_channel_bank(g, MEYER, partition=bip)
        sig = GraphSignal(g, gen.standard_normal(n))
        rec = synthesize_two_channel(bank, *analyze_two_channel(bank, sig))
        assert np.linalg.norm(rec.values - sig.values) < 1e-8 * max(
            1.0, np.linalg.norm(sig.values)
        )


class TestAnalysisOperator:
    def test_meyer_bank_is_orthogonal_up_to_sqrt2(self):
        bank = make_two_channel_bank(cycle_graph(4), MEYER)
        op = np.sqrt(2.0) * analysis_operator(bank)
        assert np.abs(op.T @ op - np.eye(4)).max() < 1e-8

    def test_unit_kernels_make_identity(self):
        ones = custom_kernel(lambda lam: np.ones_like(np.asarray(lam, dtype=float)))
        kernels = KernelSet(ones, ones, ones, ones)
        bank = make_two_channel_bank(cycle_graph(4), kernels)
        np.testing.assert_allclose(analysis_operator(bank), np.eye(4), atol=1e-10)

    def test_non_mirror_pair_breaks_orthogonality(self):
        # negative control: two identical lowpass kernels violate the mirror
        # condition, so the scaled operator cannot be orthogonal
        h0 = meyer_kernel()
        kernels = KernelSet(h0, h0, h0, h0)
        bank = make_two_channel_bank(cycle_graph(4), kernels)
        op = np.sqrt(2.0) * analysis_operator(bank)
        assert np.abs(op.T @ op - np.eye(4)).max() > 1e-2

    def test_polynomial_mode_rejected(self):
        bank = make_two_channel_bank(cycle_graph(4), MEYER, mode="polynomial", order=4)
        with pytest.raises(ValueError, match="exact"):
            analysis_operator(bank)

    def test_rows_select_channels(self, rng):
        g = cycle_graph(6)
        bank = make_two_channel_bank(g, MEYER)
        sig = rng.standard_normal(6)
        full = analysis_operator(bank) @ sig
        np.testing.assert_allclose(full, bank.analyze_values(sig), atol=1e-12)


class TestPRConditions:
    def test_exact_meyer_set_is_clean_on_grid(self):
        report = verify_pr_conditions(MEYER, np.linspace(0, 2, 1000))
        assert report.aliasing_residual < 1e-12
        assert report.distortion_residual < 1e-12
        assert report.orthogonality_residual < 1e-12

    def test_exact_ideal_set_is_clean_including_fold_point(self):
        grid = np.concatenate([np.linspace(0, 2, 1000), [1.0]])
        report = verify_pr_conditions(IDEAL, grid)
        assert report.max_residual() < 1e-12

    def test_spectrum_input_accepted(self):
        spec = eigendecompose(normalized_laplacian(cycle_graph(6)))
        assert verify_pr_conditions(MEYER, spec).max_residual() < 1e-12

    def test_low_order_polynomial_set_has_positive_residuals(self):
        from graphfb import polynomial_spectral_kernel

        poly = chebyshev_fit(meyer_kernel(), 2)
        h0 = polynomial_spectral_kernel(poly)
        h1 = polynomial_spectral_kernel(poly.mirrored())
        report = verify_pr_conditions(KernelSet(h0, h1, h0, h1), np.linspace(0, 2, 1000))
        # mirror construction still cancels aliasing exactly
        assert report.aliasing_residual < 1e-12
        grid = np.linspace(0, 2, 1000)
        deviation = np.abs(poly(grid) ** 2 + poly(2 - grid) ** 2 - 1.0).max()
        assert report.distortion_residual == pytest.approx(deviation, rel=1e-9)
        assert report.orthogonality_residual > 1e-3

    def test_swapped_synthesis_kernels_alias(self):
        swapped = KernelSet(MEYER.h0, MEYER.h1, g0=MEYER.h1, g1=MEYER.h0)
        report = verify_pr_conditions(swapped, np.linspace(0, 2, 1000))
        assert report.aliasing_residual > 1e-2


class TestSeparableCascade:
    def test_single_stage_matches_two_channel(self, rng):
        g = cycle_graph(8)
        decomp = harary_decompose(g, greedy_coloring(g))
        assert decomp.n_stages == 1
        bank = SeparableBank(g, decomp, MEYER)
        sig = GraphSignal(g, rng.standard_normal(8))
        tree = bank.analyze(sig)
        two = make_two_channel_bank(g, MEYER, partition=decomp.stages[0].partition)
        y_low, y_high = analyze_two_channel(two, sig)
        np.testing.assert_allclose(tree.channel("L").coefficients, y_low, atol=1e-12)
        np.testing.assert_allclose(tree.channel("H").coefficients, y_high, atol=1e-12)

    def test_triangle_channels(self, rng):
        g = complete_graph(3)
        bank = separable_bank(g)
        tree = bank.analyze(GraphSignal(g, rng.standard_normal(3)))
        assert tree.labels == ("LL", "LH", "HL", "HH")
        assert tree.nonempty_labels() == ("LL", "HL", "HH")
        assert len(tree.channel("LH").vertices) == 0  # explicit empty channel
        assert tree.total_coefficients() == 3

    def test_triangle_round_trip(self, rng):
        g = complete_graph(3)
        bank = separable_bank(g)
        sig = GraphSignal(g, rng.standard_normal(3))
        rec = bank.synthesize(bank.analyze(sig))
        assert np.abs(rec.values - sig.values).max() < 1e-8

    def test_eight_lattice_round_trip_exact(self, rng):
        g = image_graph(8, 8, "eight")
        bank = separable_bank(g, coloring=lattice_parity_coloring(8, 8))
        assert bank.n_stages == 2
        sig = GraphSignal(g, rng.standard_normal(64))
        rec = bank.synthesize(bank.analyze(sig))
        rel = np.linalg.norm(rec.values - sig.values) / np.linalg.norm(sig.values)
        assert rel < 1e-8

    def test_planar_fixture_three_channels(self):
        g, coloring, points = planar_three_colorable(60, 7)
        assert greedy_coloring(g).k == 3
        bank = separable_bank(g)
        gen = np.random.default_rng(7)
        tree = bank.analyze(quadrant_signal(g, points, gen))
        assert len(tree.nonempty_labels()) == 3
        assert tree.total_coefficients() == 60

    def test_lowpass_only_reconstruction_loses_energy(self, rng):
        g = image_graph(4, 4, "eight")
        bank = separable_bank(g, coloring=lattice_parity_coloring(4, 4))
        sig = GraphSignal(g, rng.standard_normal(16))
        tree = bank.analyze(sig)
        smooth = bank.synthesize(tree.with_only("LL"))
        assert np.sum(smooth.values**2) <= np.sum(sig.values**2) + 1e-10

    def test_polynomial_error_shrinks_with_order(self):
        g, _, points = planar_three_colorable(60, 7)
        gen = np.random.default_rng(3)
        sig = quadrant_signal(g, points, gen)
        errors = {}
        for order in (2, 6, 10, 12):
            bank = separable_bank(g, mode="polynomial", order=order)
            rec = bank.synthesize(bank.analyze(sig))
            errors[order] = np.linalg.norm(rec.values - sig.values) / np.linalg.norm(
                sig.values
            )
        assert errors[10] < errors[6] < errors[2]
        assert errors[12] < errors[6]
        assert errors[6] > 0.0

    def test_lowpass_channel_dominates_piecewise_constant_energy(self):
        g, _, points = planar_three_colorable(60, 7)
        sig = quadrant_signal(g, points, np.random.default_rng(3))
        bank = separable_bank(g, mode="polynomial", order=6)
        tree = bank.analyze(sig)
        report = channel_energy_report(bank, tree, sig)
        ll_share = report.energies["LL"] / report.total_energy()
        assert ll_share > 0.5

    def test_polynomial_cascade_error_bounded_by_stage_budget(self):
        g = image_graph(6, 6, "eight")
        coloring = lattice_parity_coloring(6, 6)
        decomp = harary_decompose(g, coloring)
        gen = np.random.default_rng(5)
        sig = GraphSignal(g, gen.standard_normal(36))
        order = 6
        bank = SeparableBank(g, decomp, MEYER, "polynomial", order)
        rec = bank.synthesize(bank.analyze(sig))
        rel = np.linalg.norm(rec.values - sig.values) / np.linalg.norm(sig.values)
        poly = chebyshev_fit(meyer_kernel(), order)
        budget = 1.0
        for stage_bank in bank.stage_banks:
            lam = eigendecompose(stage_bank.laplacian).eigenvalues
            budget *= 1.0 + np.abs(poly(lam) ** 2 + poly(2 - lam) ** 2 - 1.0).max()
        assert 0.0 < rel <= budget - 1.0 + 1e-12

    def test_inconsistent_tree_rejected(self, rng):
        g = complete_graph(3)
        bank = separable_bank(g)
        other = separable_bank(complete_graph(4))
        tree = other.analyze(GraphSignal(complete_graph(4), rng.standard_normal(4)))
        with pytest.raises(ValueError, match="tree"):
            bank.synthesize(tree)

    def test_functional_wrappers(self, rng):
        g = complete_graph(3)
        decomp = harary_decompose(g, greedy_coloring(g))
        sig = GraphSignal(g, rng.standard_normal(3))
        tree = analyze_separable(g, decomp, MEYER, "exact", sig)
        rec = synthesize_separable(g, decomp, MEYER, "exact", tree)
        assert np.abs(rec.values - sig.values).max() < 1e-8

    @given(st.integers(0, 2**31 - 1), st.integers(2, 14), st.floats(0.1, 0.9))
    @settings(max_examples=25, deadline=None)
    def test_critical_sampling_on_random_graphs(self, seed, n, p):
        from graphfb.fixtures import random_graph

        gen = np.random.default_rng(seed)
        g = random_graph(n, p, gen)
        decomp = harary_decompose(g, greedy_coloring(g))
        bank = SeparableBank(g, decomp, MEYER)
        sig = GraphSignal(g, gen.standard_normal(n))
        tree = bank.analyze(sig)
        assert tree.total_coefficients() == n
        seen = set()
        for channel in tree.channels:
            assert not (set(channel.vertices) & seen)
            seen.update(channel.vertices)
        assert seen == set(range(n))
        rec = bank.synthesize(tree)
        assert np.linalg.norm(rec.values - sig.values) < 1e-8 * max(
            1.0, np.linalg.norm(sig.values)
        )


class TestOrthonormality:
    def test_per_stage_residuals_vanish_in_exact_mode(self):
        g = image_graph(4, 4, "eight")
        bank = separable_bank(g, coloring=lattice_parity_coloring(4, 4))
        for residual in stage_orthogonality_residuals(bank):
            assert residual < 1e-8

    def test_channel_energies_sum_to_signal_energy(self, rng):
        g = image_graph(4, 4, "eight")
        bank = separable_bank(g, coloring=lattice_parity_coloring(4, 4))
        sig = GraphSignal(g, rng.standard_normal(16))
        tree = bank.analyze(sig)
        report = channel_energy_report(bank, tree, sig)
        assert report.total_energy() == pytest.approx(np.sum(sig.values**2), abs=1e-8)
        assert report.additivity_residual < 1e-10

    def test_degenerate_no_stage_tree_is_passthrough(self, rng):
        g = Graph.from_edges(3, [])
        bank = separable_bank(g)
        assert bank.n_stages == 0
        sig = GraphSignal(g, rng.standard_normal(3))
        tree = bank.analyze(sig)
        assert tree.labels == ("",)
        report = channel_energy_report(bank, tree, sig)
        np.testing.assert_allclose(report.contributions[""], sig.values, atol=1e-12)


class TestCommutation:
    def test_structural_zero_on_triangle(self):
        g = complete_graph(3)
        decomp = harary_decompose(g, greedy_coloring(g))
        assert verify_commutation(g, decomp, MEYER) < 1e-10
        assert verify_commutation(g, decomp, MEYER, "polynomial", order=4) < 1e-10

    def test_structural_zero_on_eight_lattice(self):
        g = image_graph(4, 4, "eight")
        decomp = harary_decompose(g, lattice_parity_coloring(4, 4))
        assert verify_commutation(g, decomp, MEYER) < 1e-10

    def test_cross_edge_in_late_stage_breaks_commutation(self):
        # move the (0, 2) edge of the triangle's first stage into the second:
        # the partition structure stays legal but the stage-2 filter no longer
        # commutes with the stage-1 sign flip
        g = complete_graph(3)
        decomp = harary_decompose(g, Coloring((1, 2, 3), 3))
        first, second = decomp.stages
        moved = BipartiteDecomposition(
            3,
            (
                DecompositionStage(first.partition, first.edges[:1]),
                DecompositionStage(second.partition, second.edges + first.edges[1:]),
            ),
        )
        from graphfb import validate_decomposition

        validate_decomposition(g, moved)  # still structurally legal
        assert verify_commutation(g, moved, MEYER) > 1e-3

    def test_single_stage_rejected(self):
        g = cycle_graph(4)
        decomp = harary_decompose(g, greedy_coloring(g))
        with pytest.raises(ValueError, match="two"):
            verify_commutation(g, decomp, MEYER)


class TestSeparableOperatorIdentity:
    def test_joint_highpass_channel_operator_factorizes(self):
        # the full cascade restricted to the high/high channel equals masking
        # by both high sides after applying both highpass filters: the
        # commutation of later filters with earlier sign flips collapses the
        # cross terms
        g = image_graph(4, 4, "eight")
        decomp = harary_decompose(g, lattice_parity_coloring(4, 4))
        bank = SeparableBank(g, decomp, MEYER)
        b1, b2 = bank.stage_banks
        cascade = analysis_operator(b2) @ analysis_operator(b1)
        m1 = np.diag((b1.signs > 0).astype(float))
        m2 = np.diag((b2.signs > 0).astype(float))
        joint_high = m2 @ m1
        factored = joint_high @ b2.filter_matrix("h1") @ b1.filter_matrix("h1")
        assert np.abs(joint_high @ cascade - factored).max() < 1e-10


class TestAliasingNecessity:
    def test_bump_on_highpass_kernel_breaks_reconstruction(self, rng):
        # perturb the mirror kernel on one spectral region; aliasing no longer
        # cancels and the round trip error is bounded away from zero
        def bumped(lam):
            lam = np.asarray(lam, dtype=float)
            base = meyer_kernel()(2.0 - lam)
            return base + 0.1 * np.exp(-((lam - 0.5) ** 2) / 0.02)

        kernels = KernelSet(
            h0=meyer_kernel(),
            h1=custom_kernel(bumped),
            g0=meyer_kernel(),
            g1=custom_kernel(bumped),
        )
        report = verify_pr_conditions(kernels, np.linspace(0, 2, 1000))
        assert report.aliasing_residual > 1e-3
        g, bip = random_connected_bipartite_graph(24, np.random.default_rng(2))
        bank = make_two_channel_bank(g, kernels, partition=bip)
        sig = GraphSignal(g, rng.standard_normal(24))
        rec = synthesize_two_channel(bank, *analyze_two_channel(bank, sig))
        rel = np.linalg.norm(rec.values - sig.values) / np.linalg.norm(sig.values)
        assert rel > 1e-3


class TestDownsampledGraph:
    def test_even_cycle_halves_to_cycle(self):
        level = downsampled_graph(cycle_graph(8), [0, 2, 4, 6], hop=2)
        assert level.original_ids == (0, 2, 4, 6)
        assert set(level.graph.edge_pairs()) == {(0, 1), (1, 2), (2, 3), (0, 3)}

    def test_keeping_everything_gives_a_supergraph(self):
        g = path_graph(5)
        level = downsampled_graph(g, range(5), hop=2)
        assert set(g.edge_pairs()) <= set(level.graph.edge_pairs())

    def test_path_endpoints_reconnect(self):
        level = downsampled_graph(path_graph(4), [0, 2], hop=2)
        assert set(level.graph.edge_pairs()) == {(0, 1)}

    def test_empty_keep_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            downsampled_graph(cycle_graph(4), [])

    def test_small_hop_rejected(self):
        with pytest.raises(ValueError, match="hop"):
            downsampled_graph(cycle_graph(4), [0, 2], hop=1)

    def test_multires_recursion_on_lowpass_channel(self, rng):
        # coarse graph from the lowpass channel supports another decomposition
        g = image_graph(4, 4, "eight")
        bank = separable_bank(g, coloring=lattice_parity_coloring(4, 4))
        tree = bank.analyze(GraphSignal(g, rng.standard_normal(16)))
        ll = tree.channel("LL")
        level = downsampled_graph(g, ll.vertices, hop=2)
        coarse_bank = separable_bank(level.graph)
        coarse = GraphSignal(level.graph, ll.coefficients)
        rec = coarse_bank.synthesize(coarse_bank.analyze(coarse))
        assert np.abs(rec.values - coarse.values).max() < 1e-8
