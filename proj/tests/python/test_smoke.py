# Copyright (c) 2026 The ergofit authors
# SPDX-License-Identifier: Apache-2.0
"""Smoke tests for the python bindings: one pass over every exposed surface."""

import json
import math
import os
import tempfile
import unittest

import ergofit as ef


class ModelTests(unittest.TestCase):
    def test_family_closed_forms(self):
        fam = ef.make_family(1.0, 1.0, ef.ThetaBox(-2, 2, 0.5, 3))
        th = ef.Theta(0.0, 1.0)
        self.assertEqual(fam.regime, ef.GammaRegime.HighGamma)
        self.assertAlmostEqual(fam.invariant_density(th, 0.0), 1.0 / math.sqrt(math.pi), places=12)
        self.assertAlmostEqual(fam.invariant_cdf(th, 0.0), 0.5, places=14)
        p = fam.invariant_cdf(th, 1.0)
        self.assertAlmostEqual(fam.invariant_quantile(th, p), 1.0, places=8)
        self.assertAlmostEqual(fam.standardize(ef.Theta(2.0, 4.0), 3.0), 2.0, places=10)
        mom = ef.stationary_moments(1.0)
        self.assertAlmostEqual(mom.a, 1.0, places=8)
        self.assertAlmostEqual(mom.b, 0.5, places=8)

    def test_validation_errors_map_to_value_error(self):
        with self.assertRaises(ValueError):
            ef.make_family(-1.0, 1.0, ef.ThetaBox(-2, 2, 0.5, 3))
        with self.assertRaises(ValueError):
            ef.build_simple_model("simple:not-a-drift")

    def test_simple_model_from_spec_and_callable(self):
        ou = ef.build_simple_model("simple:ou")
        self.assertAlmostEqual(ou.density(0.0), 1.0 / math.sqrt(math.pi), places=8)
        self.assertTrue(ou.tail_check_ok)
        custom = ef.SimpleModel(lambda x: -x, lambda x: 1.0, ef.Interval(-8, 8), "py-ou")
        self.assertAlmostEqual(custom.cdf(ou.quantile(0.25)), 0.25, places=6)


class PipelineTests(unittest.TestCase):
    def test_simulate_estimate_test_decide(self):
        fam = ef.build_family_model("family:gamma=1,sigma=1,box=-2:2x0.5:3")
        th = ef.Theta(0.5, 1.0)
        x0 = ef.sample_stationary_init(fam, th, seed=3, stream_id=0)
        traj = ef.simulate_family_path(fam, th, x0, 200.0, 0.01, seed=3, stream_id=1)
        self.assertEqual(traj.n_steps, 20000)

        est = ef.mle(traj, fam)
        self.assertLess(abs(est.theta.alpha - 0.5), 0.4)
        self.assertFalse(est.boundary_hit_alpha)

        stat = ef.param_stat(traj, fam, est, "ParamEDF:CvM")
        self.assertEqual(stat.law_id, "Delta:gamma=1")
        self.assertGreaterEqual(stat.value, 0.0)

        table = ef.calibrate("Delta:gamma=1", [0.05, 0.1], 2000, seed=5)
        self.assertGreater(table.threshold_for(0.05), table.threshold_for(0.1))
        self.assertIn(ef.decide(stat, table, 0.1), ("accept", "reject"))

    def test_adf_statistic_and_limit_samples(self):
        ou = ef.build_simple_model("simple:ou")
        x0 = ef.sample_stationary_init(
            ef.build_family_model("family:gamma=1,sigma=1,box=-2:2x0.5:3"), ef.Theta(0, 1), 7
        )
        traj = ef.simulate_simple_path(ou, x0, 100.0, 0.01, seed=7, stream_id=2)
        stat = ef.adf_stat(traj, ou)
        self.assertEqual(stat.law_id, "int_w2")
        samples = ef.draw_limit_samples("int_w2", 2000, seed=9)
        mean = sum(samples) / len(samples)
        self.assertLess(abs(mean - 0.5), 0.05)
        simple_samples = ef.draw_simple_limit_samples(ou, "CvM", 1000, seed=10)
        self.assertTrue(all(v >= 0.0 for v in simple_samples))
        self.assertTrue(ef.simple_law_id(ou, "CvM").startswith("delta_S0:"))

    def test_estimator_bindings(self):
        fam = ef.build_family_model("family:gamma=1,sigma=1,box=-2:2x0.5:3")
        th = ef.Theta(0.0, 1.0)
        traj = ef.simulate_family_path(fam, th, 0.0, 300.0, 0.01, seed=21)
        grid = [fam.invariant_quantile(th, (j + 1) / 41.0) for j in range(40)]
        edf_vals = ef.edf(traj, grid)
        self.assertTrue(all(0.0 <= v <= 1.0 for v in edf_vals))
        self.assertEqual(sorted(edf_vals), list(edf_vals))
        dens = ef.local_time_density(traj, grid, lambda x: 1.0)
        self.assertTrue(all(v >= 0.0 for v in dens))
        ll_true = ef.log_likelihood(traj, fam, th)
        ll_far = ef.log_likelihood(traj, fam, ef.Theta(1.9, 2.9))
        self.assertGreater(ll_true, ll_far)

    def test_trajectory_csv_roundtrip(self):
        ou = ef.build_simple_model("simple:ou")
        traj = ef.simulate_simple_path(ou, 0.0, 10.0, 0.01, seed=11)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "traj.csv")
            ef.write_trajectory_csv(traj, path)
            back = ef.read_trajectory_csv(path)
            self.assertEqual(list(back.values), list(traj.values))

    def test_run_study_roundtrip(self):
        cfg = {
            "study": "size",
            "model": "simple:ou",
            "T": 50.0,
            "n_replicates": 60,
            "stats": ["ADF:CvM"],
            "epsilons": [0.1],
            "seed": 13,
            "calibration_n": 2000,
            "calibration_seed": 14,
        }
        with tempfile.TemporaryDirectory() as tmp:
            summary = json.loads(ef.run_study(json.dumps(cfg), tmp))
            self.assertIn("rejections", summary)
            self.assertTrue(os.path.exists(os.path.join(tmp, "rows.csv")))
            rate = summary["rejections"][0]["rejection_rate"]
            self.assertGreaterEqual(rate, 0.0)
            self.assertLessEqual(rate, 1.0)

    def test_defaults_exposed(self):
        defaults = json.loads(ef.defaults_json())
        self.assertEqual(defaults["stat_grid_m"], 400)
        self.assertEqual(defaults["w_n_steps"], 1000)


if __name__ == "__main__":
    unittest.main()
