import pytest

from convnc import (
    Channel,
    CncInstance,
    Matrix,
    MatrixSeries,
    NetworkGraph,
    NotNormalError,
    RationalSeries,
    classify,
    derive_geks,
    gek_at_sink,
    neumann_expand,
    parse_rational,
    random_instance,
)
from convnc.network import lek_matrix

from oracles import convolve

# ---------------------------------------------------------
# classification
# ---------------------------------------------------------

def test_feasible_fixture_all_flags_true(cyclic_feasible):
    fr = classify(cyclic_feasible)
    assert fr.et_k0_acyclic
    assert fr.k0_nilpotent
    assert fr.i_minus_k0_invertible
    assert fr.normal
    assert fr.practically_feasible


def test_mixing_ring_normal_but_not_nilpotent(mixing_ring):
    fr = classify(mixing_ring)
    assert not fr.k0_nilpotent
    assert fr.i_minus_k0_invertible
    assert fr.normal
    assert not fr.practically_feasible


def test_overlapping_cycles_nilpotent_but_infeasible(overlapping_cycles):
    fr = classify(overlapping_cycles)
    assert fr.k0_nilpotent and fr.k0_nilpotency_index == 4
    assert not fr.et_k0_acyclic
    assert fr.normal


def test_flag_implications_on_random_instances(gf2, gf4):
    for seed in range(120):
        inst = random_instance(
            seed + 7_000,
            gf2 if seed % 2 else gf4,
            cycle_density=0.5,
            feasible=(seed % 3 == 0),
        )
        fr = classify(inst)
        assert fr.practically_feasible == fr.et_k0_acyclic
        assert fr.normal == fr.i_minus_k0_invertible
        if fr.et_k0_acyclic:
            assert fr.k0_nilpotent
        if fr.k0_nilpotent:
            assert fr.i_minus_k0_invertible
            assert fr.k0_nilpotency_index >= 1


# ---------------------------------------------------------
# transfer derivation
# ---------------------------------------------------------

def test_mixing_ring_transfer_constant_term(mixing_ring, gf2):
    transfer = derive_geks(mixing_ring, 6)
    assert transfer.coeffs[0] == Matrix(
        gf2, [[1, 0, 1, 1, 1, 1], [0, 1, 1, 1, 0, 0]]
    )


def test_mixing_ring_transfer_matches_rational_expansion(mixing_ring, gf2):
    transfer = derive_geks(mixing_ring, 6)
    inv = "1/(1-z)"
    zinv = "z/(1-z)"
    printed = [
        ["1", "0", inv, "1", inv, inv],
        ["0", "1", inv, "1", zinv, zinv],
    ]
    expected = MatrixSeries.from_rational(
        [[parse_rational(cell, gf2) for cell in row] for row in printed], 6
    )
    assert transfer == expected


def test_mixing_ring_transfer_at_deep_horizon(mixing_ring, gf2):
    # the recursion stays exact far beyond the display depth
    transfer = derive_geks(mixing_ring, 50)
    geometric = parse_rational("1/(1-z)", gf2).expand(50)
    shifted = parse_rational("z/(1-z)", gf2).expand(50)
    for t in range(51):
        assert transfer.coeffs[t].data[0][2] == geometric[t]
        assert transfer.coeffs[t].data[1][4] == shifted[t]
        assert transfer.coeffs[t].data[0][0] == (1 if t == 0 else 0)


def test_zero_kernels_pass_injection_through(gf2):
    g = NetworkGraph(
        ["S", "X"],
        [Channel("e1", "S", "X"), Channel("e2", "S", "X"), Channel("e3", "S", "X")],
        "S",
        2,
        ["X"],
    )
    inst = CncInstance(gf2, g, {})
    transfer = derive_geks(inst, 3)
    assert transfer.coeffs[0] == inst.hs
    assert all(c.is_zero for c in transfer.coeffs[1:])


def _singular_instance(gf2):
    # undelayed kernels around a two-channel ring make I - K_0 singular
    g = NetworkGraph(
        ["S", "A", "B"],
        [Channel("e1", "S", "A"), Channel("e2", "A", "B"), Channel("e3", "B", "A")],
        "S",
        1,
        [],
    )
    one = RationalSeries.one(gf2)
    return CncInstance(gf2, g, {("e2", "e3"): one, ("e3", "e2"): one})


def test_singular_constant_part_raises(gf2):
    inst = _singular_instance(gf2)
    assert not classify(inst).normal
    with pytest.raises(NotNormalError, match="singular"):
        derive_geks(inst, 4)


def test_transfer_satisfies_defining_equation(gf2, gf4):
    # F(z) (I - K(z)) = H_s, checked coefficient by coefficient
    horizon = 8
    for seed in range(60):
        field = gf2 if seed % 2 else gf4
        inst = random_instance(seed + 11_000, field, cycle_density=0.4, feasible=(seed % 3 > 0))
        if not classify(inst).normal:
            continue
        transfer = derive_geks(inst, horizon)
        kernel = lek_matrix(inst, horizon)
        n = inst.graph.n
        i_minus_k = MatrixSeries.identity(field, n, horizon) + MatrixSeries(
            [-c for c in kernel.coeffs]
        )
        product = transfer @ i_minus_k
        assert product.coeffs[0] == inst.hs
        assert all(c.is_zero for c in product.coeffs[1:])


def test_transfer_equals_injection_times_neumann_expansion(gf2, gf4):
    horizon = 7
    hits = 0
    for seed in range(80):
        field = gf2 if seed % 2 else gf4
        inst = random_instance(seed + 13_000, field, cycle_density=0.4, feasible=True)
        transfer = derive_geks(inst, horizon)
        expansion = neumann_expand(lek_matrix(inst, horizon), horizon)
        via_neumann = MatrixSeries([inst.hs @ c for c in expansion.coeffs])
        assert transfer == via_neumann
        hits += 1
    assert hits == 80


def test_derivation_is_solver_order_independent(mixing_ring, gf2):
    # second route: solve each coefficient equation transposed, with the
    # equations presented in reversed row order
    horizon = 5
    transfer = derive_geks(mixing_ring, horizon)
    kernel = lek_matrix(mixing_ring, horizon)
    n = mixing_ring.graph.n
    eye = Matrix.identity(gf2, n)
    a_t = (eye - kernel.coeffs[0]).transpose()
    perm = list(reversed(range(n)))
    a_perm = a_t.select_rows(perm)
    coeffs = []
    for t in range(horizon + 1):
        rhs = mixing_ring.hs if t == 0 else Matrix.zeros(gf2, mixing_ring.graph.omega, n)
        acc = rhs
        for tau in range(t):
            acc = acc + (coeffs[tau] @ kernel.coeffs[t - tau])
        solved = a_perm.solve_right(acc.transpose().select_rows(perm))
        assert solved is not None
        coeffs.append(solved.transpose())
    assert MatrixSeries(coeffs) == transfer


def test_channel_wise_kernel_identity(gf2):
    # f_e = sum_d k_{d,e} f_d + injection column, expanded and convolved
    horizon = 8
    for seed in range(25):
        inst = random_instance(seed + 17_000, gf2, cycle_density=0.4, feasible=True)
        transfer = derive_geks(inst, horizon)
        g = inst.graph
        for e_idx, e in enumerate(g.channels):
            for row in range(g.omega):
                expected = [0] * (horizon + 1)
                expected[0] = 0
                hs_gain = inst.hs.data[row][e_idx]
                if hs_gain:
                    expected[0] = hs_gain
                for d_idx in g.in_channels(e.tail):
                    k = inst.lek(g.channels[d_idx].id, e.id)
                    if k.is_zero:
                        continue
                    fd = [transfer.coeffs[t].data[row][d_idx] for t in range(horizon + 1)]
                    part = convolve(gf2, k.expand(horizon), fd, horizon)
                    expected = [gf2.add(a, b) for a, b in zip(expected, part)]
                got = [transfer.coeffs[t].data[row][e_idx] for t in range(horizon + 1)]
                assert got == expected


# ---------------------------------------------------------
# sink restriction
# ---------------------------------------------------------

def test_delayed_merge_sink_view(delayed_merge, gf2):
    transfer = derive_geks(delayed_merge, 6)
    at_sink = gek_at_sink(transfer, delayed_merge, "X")
    printed = [["1", "z^2"], ["z", "z^2"]]
    expected = MatrixSeries.from_rational(
        [[parse_rational(cell, gf2) for cell in row] for row in printed], 6
    )
    assert at_sink == expected


def test_direct_sink_sees_identity_columns(gf2):
    g = NetworkGraph(
        ["S", "X"],
        [Channel("e1", "S", "X"), Channel("e2", "S", "X")],
        "S",
        2,
        ["X"],
    )
    inst = CncInstance(gf2, g, {})
    at_sink = gek_at_sink(derive_geks(inst, 2), inst, "X")
    assert at_sink.coeffs[0] == Matrix.identity(gf2, 2)


def test_sink_view_equals_manual_column_slice(gf2):
    for seed in range(20):
        inst = random_instance(seed + 19_000, gf2, sinks=2, feasible=True)
        transfer = derive_geks(inst, 5)
        for sink in inst.graph.sinks:
            incoming = inst.graph.in_channels(sink)
            restricted = gek_at_sink(transfer, inst, sink)
            for t in range(6):
                manual = [
                    [transfer.coeffs[t].data[r][c] for c in incoming]
                    for r in range(inst.graph.omega)
                ]
                assert restricted.coeffs[t] == Matrix(gf2, manual)


def test_unknown_sink_rejected(delayed_merge):
    transfer = derive_geks(delayed_merge, 2)
    with pytest.raises(ValueError, match="not a declared sink"):
        gek_at_sink(transfer, delayed_merge, "A")
