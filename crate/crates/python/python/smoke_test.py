"""Quick check of the extension module: python smoke_test.py"""

import susyqm

TABLE = [49.1225, 142.835, 224.542, 294.245, 351.943, 397.635, 431.323, 453.005, 462.683]


def main():
    m = susyqm.Model.tanh6(24.0, 0.35)
    assert m.family == "tanh6" and m.n_max == 8, m
    assert all(abs(a - b) <= 5e-4 + 1e-9 for a, b in zip(m.spectrum(), TABLE))
    assert abs(m.asymptote - 463.245) < 1e-3

    s = susyqm.Model.scarf2(7, 4, 1)
    assert s.spectrum() == [0.0, 13.0, 24.0, 33.0, 40.0, 45.0, 48.0]
    assert s.continuum_threshold == 49.0

    osc = susyqm.Model.oscillator()
    cfg = susyqm.SolverConfig(osc, half_width=12.0, grid_points=8000)
    for n in range(4):
        assert abs(susyqm.wkb_energy(osc, n, cfg) - (2 * n + 1)) < 1e-6
        assert abs(susyqm.swkb_energy(osc, n, cfg) - (2 * n + 1)) < 1e-6
        assert abs(susyqm.shooting_energy(osc, n, cfg) - (2 * n + 1)) < 1e-3
    fd = susyqm.fd_spectrum(osc, 4, cfg)
    assert all(abs(e - (2 * n + 1)) < 1e-3 for n, e in enumerate(fd)), fd
    assert abs(susyqm.richardson_order(osc, 0, cfg) - 2.0) < 0.1

    assert s.state(3).parity is None and s.state(3).node_count(-30, 30) == 3
    state = m.state(1)
    assert state.parity == "odd" and state.node_count(-24, 24) == 1
    assert abs(state(0.0)) < 1e-12 and state.decay_rate < 0

    rows = susyqm.build_table(s, susyqm.SolverConfig(s, grid_points=8000), methods=["swkb", "nde"])
    assert [r["n"] for r in rows] == list(range(7))
    assert rows[0]["per_method"]["SWKB"]["err_pct"] is None
    csv = susyqm.table_report(s, "csv", susyqm.SolverConfig(s, grid_points=8000), methods=["swkb"])
    assert csv.splitlines()[0] == "n,exact,SWKB,SWKB_err_pct,SWKB_flag", csv

    report = susyqm.validate(s)
    assert all(c["passed"] for c in report["checks"])
    faulty = susyqm.validate(s, inject_fault=True)
    assert not all(c["passed"] for c in faulty["checks"])

    try:
        susyqm.Model.tanh6(24.0, 9.0)
    except susyqm.SusyError as e:
        assert isinstance(e, ValueError)
    else:
        raise AssertionError("invalid parameters accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
