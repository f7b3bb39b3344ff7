import json
import math

import numpy as np
import pytest

from skgeom.app import (
    SIEGEL_SIGN,
    SUITES,
    CatalogError,
    ConfigError,
    EmptySampleError,
    NormalizationError,
    RunConfig,
    domain_scan,
    load_prepotential,
    literal_embedding_matrix,
    run_suite,
    run_suites,
    sample_points,
    siegel_embed,
)
from skgeom.app.cli import main
from skgeom.app.siegel import SiegelDomainError, lagrangian_basis, tau_from_basis
from skgeom.app.suite import render_csv, render_json


class TestCatalog:
    def test_quadratic_monomials(self):
        e = load_prepotential("quadratic", n=2)
        assert dict(e.monomials) == {(0, 0): -1j, (2, 0): 0.5j, (0, 2): 0.5j}
        assert e.complete and e.radius == pytest.approx(math.sqrt(2))

    def test_cubic_hessian(self):
        e = load_prepotential({"name": "cubic", "c": 0.1})
        assert e.prepotential.derivative((2,), [0.0]) == 1j
        assert not e.complete

    def test_inline_rejects_gradient(self):
        src = {"n": 1, "monomials": [[[0], [0, -1]], [[1], 1], [[2], [0, 0.5]]]}
        with pytest.raises(NormalizationError, match="grad"):
            load_prepotential(src)

    def test_inline_accepts_normal_form(self):
        src = {"n": 1, "monomials": [[[0], [0, -1]], [[2], [0, 0.5]], [[4], 0.2]]}
        e = load_prepotential(src)
        assert e.name == "inline" and not e.complete

    @pytest.mark.parametrize(
        "terms,cond",
        [({(0,): -2j, (2,): 0.5j}, "u\\(0\\)"), ({(0,): -1j, (2,): 1j}, "Hess")],
    )
    def test_normalization_names_condition(self, terms, cond):
        src = {"n": 1, "monomials": [[list(k), [v.real, v.imag]] for k, v in terms.items()]}
        with pytest.raises(NormalizationError, match=cond):
            load_prepotential(src)

    def test_unknown_name(self):
        with pytest.raises(CatalogError, match="nope"):
            load_prepotential("nope")

    def test_quartic_limits(self):
        assert load_prepotential("quartic-perturbed", n=3).n == 3
        with pytest.raises(CatalogError):
            load_prepotential("quartic-perturbed", n=4)
        with pytest.raises(CatalogError, match="degree"):
            load_prepotential({"name": "quartic-perturbed", "n": 1, "perturbation": [[[5], 0.1]]})


class TestSiegel:
    def test_origin(self):
        e = load_prepotential("quadratic", n=2)
        sp = siegel_embed([0, 0], e)
        assert np.allclose(sp.tau, 1j * np.eye(3))
        assert np.linalg.eigvalsh(sp.Y).min() > 0
        literal = tau_from_basis(literal_embedding_matrix([0, 0], e))
        assert np.allclose(literal, sp.tau)

    def test_sign_fixed_by_origin(self):
        e = load_prepotential("quadratic", n=1)
        flipped = tau_from_basis(lagrangian_basis([0.0], e), sign=-SIEGEL_SIGN)
        assert np.linalg.eigvalsh(flipped.imag).max() < 0

    def test_random_points(self):
        e = load_prepotential("quadratic", n=2)
        rng = np.random.default_rng(31)
        for _ in range(20):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            z = v / np.linalg.norm(v) * math.sqrt(1.9 * rng.random())
            sp = siegel_embed(z, e)
            assert sp.symmetry_defect < 1e-10 and sp.min_eig_Y > 0

    def test_ray_degenerates(self):
        e = load_prepotential("quadratic", n=1)
        eigs = [siegel_embed([math.sqrt(r2)], e).min_eig_Y for r2 in (0, 0.5, 1, 1.5, 1.9)]
        assert all(a > b for a, b in zip(eigs, eigs[1:]))

    def test_outside_domain(self):
        e = load_prepotential("quadratic", n=1)
        with pytest.raises(SiegelDomainError):
            siegel_embed([1.5], e)

    def test_quadratic_only(self):
        with pytest.raises(ValueError):
            siegel_embed([0.0], load_prepotential("cubic"))


class TestScan:
    def test_quadratic_grid_cut_at_ball(self):
        e = load_prepotential("quadratic")
        r = domain_scan(e, {"kind": "grid", "re": [-1.6, 1.6, 9], "im": [-1.6, 1.6, 9]})
        assert all(abs(z[0]) ** 2 < 2 for z in r.accepted)
        assert all(abs(z[0]) ** 2 >= 2 - 1e-6 for z, _ in r.rejected)

    def test_rejection_reason(self):
        e = load_prepotential("quadratic")
        r = domain_scan(e, {"kind": "points", "points": [0.0, 2.0]})
        assert len(r) == 1
        assert r.rejected[0][1].startswith("e^{-K} <= 0")

    def test_empty_raises(self):
        with pytest.raises(EmptySampleError):
            domain_scan(load_prepotential("quadratic"), {"kind": "points", "points": [2.0]})

    def test_cubic_grid_nonempty(self):
        e = load_prepotential({"name": "cubic", "c": 0.05})
        assert len(domain_scan(e, {"kind": "grid", "re": [-1, 1, 5], "im": [-1, 1, 5]})) > 0

    def test_random_is_seeded_and_inside_radius(self):
        e = load_prepotential("quartic-perturbed", n=2)
        a = sample_points(e, {"kind": "random", "count": 10}, seed=3)
        b = sample_points(e, {"kind": "random", "count": 10}, seed=3)
        assert np.array_equal(a, b)
        assert np.linalg.norm(a, axis=1).max() <= 0.95 * e.radius

    def test_bad_kind(self):
        with pytest.raises(ValueError, match="grid kind"):
            sample_points(load_prepotential("cubic"), {"kind": "spiral"})


class TestConfig:
    def test_unknown_suite_named(self):
        text = '{"prepotential": "cubic",\n "suites": ["theorem12", "bogus"]}'
        with pytest.raises(ConfigError, match=r"'bogus'.*line 2"):
            RunConfig.from_json(text)

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="'sampel'"):
            RunConfig.from_json('{"sampel": {}}')

    def test_syntax_error_position(self):
        with pytest.raises(ConfigError, match="line 2, column"):
            RunConfig.from_json('{"suites":\n [}')

    def test_defaults(self):
        cfg = RunConfig.from_json('{"suites": "all"}')
        assert cfg.order == 6 and cfg.format == "json"


def _cfg(tmp_path, **kw):
    base = dict(
        prepotential={"name": "cubic", "c": 0.1},
        sample={"kind": "random", "count": 6},
        suites=["theorem12", "yukawa-estimates"],
        out_dir=str(tmp_path),
    )
    base.update(kw)
    return RunConfig(**base)


class TestSuite:
    def test_cubic_theorem12_and_yukawa(self, tmp_path):
        run, status = run_suite(_cfg(tmp_path))
        assert status == 0
        asserted = [r.report for r in run.results if r.report.asserted]
        assert all(r.min_margin > 0 for r in asserted)
        doc = json.loads((tmp_path / "report.json").read_text())
        assert set(doc) == {"schema_version", "config_echo", "per_suite", "summary"}
        assert doc["summary"]["siegel_sign"] == SIEGEL_SIGN
        assert (tmp_path / "summary.txt").exists()

    def test_quadratic_all_suites(self, tmp_path):
        cfg = _cfg(tmp_path, prepotential={"name": "quadratic", "n": 2}, suites=list(SUITES))
        run, status = run_suite(cfg)
        assert status == 0
        doc = json.loads((tmp_path / "report.json").read_text())
        by_claim = {s["claim"]: s for s in doc["per_suite"]}
        assert by_claim["yukawa-sup-bound"]["details"]["observed_sup"] == 0
        assert -by_claim["curvature-parallel"]["min_margin"] < 1e-8
        assert by_claim["curvature-parallel"]["asserted"]

    def test_failure_sets_exit_status(self, tmp_path):
        run = run_suites(_cfg(tmp_path, suites=["parallel-curvature"], tol_identity=1e-8))
        assert run.exit_status == 0  # informational for the cubic entry
        cfg = _cfg(tmp_path, suites=["theorem12"], tol_ineq=-10.0)
        assert run_suites(cfg).exit_status == 1

    def test_point_z_serialized_as_pairs(self, tmp_path):
        run = run_suites(_cfg(tmp_path, suites=["horizontality"]))
        doc = json.loads(render_json(run))
        z = doc["per_suite"][0]["points"][0]["z"]
        assert len(z) == 1 and len(z[0]) == 2
        assert render_csv(run).splitlines()[0].startswith("suite,claim")

    def test_deterministic(self, tmp_path):
        a = render_json(run_suites(_cfg(tmp_path, suites=["theorem12"])))
        b = render_json(run_suites(_cfg(tmp_path, suites=["theorem12"])))
        assert a == b


class TestCli:
    def test_list(self, capsys):
        assert main(["list"]) == 0
        assert "quadratic" in capsys.readouterr().out

    def test_bound(self, capsys):
        assert main(["bound", "1", "6", "0", "2"]) == 0
        assert float(capsys.readouterr().out) == math.sqrt(6)

    def test_bound_error(self, capsys):
        assert main(["bound", "0", "1", "1", "2"]) == 2
        assert "c1" in capsys.readouterr().err

    def test_check(self, tmp_path, capsys):
        status = main(["check", "cubic", "--points", "4", "--out", str(tmp_path), "--format", "csv"])
        assert status == 0
        assert (tmp_path / "report.csv").exists()

    def test_run_with_bad_suite(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"suites": ["nope"]}')
        assert main(["run", str(cfg)]) == 2
        assert "'nope'" in capsys.readouterr().err

    def test_run_config(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(
            json.dumps(
                {
                    "prepotential": {"name": "quadratic", "n": 1},
                    "sample": {"kind": "ray", "direction": [1.0], "radii": [0.0, 0.5, 1.0]},
                    "suites": ["siegel", "hodge-riemann"],
                    "output": {"dir": str(tmp_path / "out")},
                }
            )
        )
        assert main(["run", str(cfg), "--seed", "3"]) == 0
        doc = json.loads((tmp_path / "out" / "report.json").read_text())
        assert doc["config_echo"]["seed"] == 3
