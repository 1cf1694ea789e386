import math
import random
import statistics

import pytest

from fuzzyvault.geometry import PlacementError
from fuzzyvault.simulate import (
    Minutia,
    NOISELESS,
    RecaptureModel,
    Template,
    gen_template,
    recapture,
    template_from_json,
    template_to_json,
)
from fuzzyvault.simulate import _poisson


def normal_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def mean_abs_rounded_gaussian(sigma: float) -> float:
    # oracle: E|round(N(0, sigma^2))| by direct summation over the discretized
    # half-normal; close to sigma*sqrt(2/pi) ~ 1.60 at sigma=2
    total = 0.0
    for j in range(1, 200):
        p = normal_cdf((j + 0.5) / sigma) - normal_cdf((j - 0.5) / sigma)
        total += 2 * j * p
    return total


class TestTemplateType:
    def test_bounds_validated(self):
        with pytest.raises(ValueError):
            Template((Minutia(300, 0, 0.0),), 256, 256)
        with pytest.raises(ValueError):
            Template((Minutia(0, 0, math.pi),), 256, 256)

    def test_json_roundtrip(self):
        tpl = gen_template(12, seed=3)
        assert template_from_json(template_to_json(tpl)) == tpl


class TestGenTemplate:
    def test_count_and_min_distance(self):
        tpl = gen_template(40, d_min=11.0, seed=1)
        assert len(tpl) == 40
        pts = [(m.x, m.y) for m in tpl.minutiae]
        for i, (x1, y1) in enumerate(pts):
            for x2, y2 in pts[i + 1 :]:
                assert (x1 - x2) ** 2 + (y1 - y2) ** 2 >= 11.0**2

    def test_single_minutia(self):
        tpl = gen_template(1, seed=9)
        assert len(tpl) == 1

    def test_deterministic(self):
        assert gen_template(20, seed=5) == gen_template(20, seed=5)

    def test_orientations_in_range_and_optionally_gridded(self):
        tpl = gen_template(50, seed=2)
        assert all(0 <= m.theta < math.pi for m in tpl.minutiae)
        snapped = gen_template(50, theta_steps=8, seed=2)
        for m in snapped.minutiae:
            assert abs(m.theta / (math.pi / 8) - round(m.theta / (math.pi / 8))) < 1e-9

    def test_saturation_raises_with_count(self):
        with pytest.raises(PlacementError) as err:
            gen_template(60, width=32, height=32, d_min=11.0, seed=0)
        assert 0 < err.value.placed < 60

    def test_coordinate_uniformity_chi_square(self):
        # 1e5 unconstrained points, 16 bins per axis, statistic within
        # 3 sigma of the chi-square(15) mean
        tpl = gen_template(10**5, width=256, height=256, d_min=0.0, seed=31)
        for axis in ("x", "y"):
            counts = [0] * 16
            for m in tpl.minutiae:
                counts[getattr(m, axis) // 16] += 1
            expected = 10**5 / 16
            stat = sum((c - expected) ** 2 / expected for c in counts)
            assert stat < 15 + 3 * math.sqrt(30)


class TestRecaptureModel:
    def test_validation(self):
        with pytest.raises(ValueError):
            RecaptureModel(miss_rate=1.5)
        with pytest.raises(ValueError):
            RecaptureModel(jitter_sigma=-1)
        with pytest.raises(ValueError):
            RecaptureModel(spurious_rate=-0.1)

    def test_defaults(self):
        m = RecaptureModel()
        assert m.jitter_sigma == 2.0 and m.miss_rate == 0.1
        assert m.spurious_rate == 3.0 and abs(m.angle_sigma - math.pi / 32) < 1e-12


class TestRecapture:
    def test_noiseless_is_identity(self):
        tpl = gen_template(25, seed=4)
        assert recapture(tpl, NOISELESS, seed=123) == tpl

    def test_deterministic(self):
        tpl = gen_template(25, seed=4)
        model = RecaptureModel()
        assert recapture(tpl, model, seed=7) == recapture(tpl, model, seed=7)

    def test_miss_rate_one_leaves_only_spurious(self):
        tpl = gen_template(25, seed=4)
        out = recapture(tpl, RecaptureModel(0.0, 1.0, 5.0, 0.0), seed=8)
        originals = {(m.x, m.y) for m in tpl.minutiae}
        assert all((m.x, m.y) not in originals for m in out.minutiae)

    def _interior_template(self, n_side=100, spacing=16):
        minutiae = tuple(
            Minutia(100 + spacing * i, 100 + spacing * j, 0.5)
            for i in range(n_side)
            for j in range(n_side)
        )
        return Template(minutiae, 2048, 2048)

    def test_mean_displacement_matches_discretized_half_normal(self):
        tpl = self._interior_template()
        out = recapture(tpl, RecaptureModel(2.0, 0.0, 0.0, 0.0), seed=17)
        assert len(out) == len(tpl)
        disps = []
        for before, after in zip(tpl.minutiae, out.minutiae):
            disps.append(abs(after.x - before.x))
            disps.append(abs(after.y - before.y))
        oracle = mean_abs_rounded_gaussian(2.0)
        sd = statistics.pstdev(disps)
        tolerance = 3 * sd / math.sqrt(len(disps))
        assert abs(statistics.mean(disps) - oracle) <= tolerance

    def test_axis_displacements_uncorrelated(self):
        tpl = self._interior_template()
        out = recapture(tpl, RecaptureModel(2.0, 0.0, 0.0, 0.0), seed=21)
        dxs = [a.x - b.x for a, b in zip(out.minutiae, tpl.minutiae)]
        dys = [a.y - b.y for a, b in zip(out.minutiae, tpl.minutiae)]
        cov = statistics.covariance([float(v) for v in dxs], [float(v) for v in dys])
        assert abs(cov) < 3 * 4.2 / math.sqrt(len(dxs))

    def test_orientation_noise_wraps(self):
        tpl = gen_template(200, seed=12)
        out = recapture(tpl, RecaptureModel(0.0, 0.0, 0.0, 1.0), seed=13)
        assert all(0 <= m.theta < math.pi for m in out.minutiae)

    def test_spurious_count_is_poisson(self):
        rng = random.Random(14)
        n = 2 * 10**4
        mean = statistics.mean(_poisson(3.0, rng) for _ in range(n))
        assert abs(mean - 3.0) <= 3 * math.sqrt(3.0 / n)

    def test_poisson_zero_rate(self):
        assert _poisson(0.0, random.Random(0)) == 0
