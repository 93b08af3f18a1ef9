import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import topoprompt as tp
from topoprompt.errors import BudgetExceedsPixelsError, SchemaError
from topoprompt.prompts import prompt_set_from_json, prompt_set_to_json


class TestTdaPrompts:
    def test_row_budget_two(self, row_image):
        pset = tp.tda_prompts(row_image, budget=2, min_persistence=0.0)
        assert pset.coords() == [(3, 0), (5, 0)]
        assert pset.points[0].score == math.inf
        assert [p.rank for p in pset.points] == [0, 1]

    def test_constant_image_single_point(self):
        img = tp.ScalarImage(6, 4, np.full(24, 0.5))
        pset = tp.tda_prompts(img, budget=100)
        assert pset.coords() == [(0, 0)]

    def test_requires_budget_or_threshold(self, row_image):
        with pytest.raises(ValueError):
            tp.tda_prompts(row_image)

    def test_synthetic_scene_count_band(self):
        img, scene = tp.generate_scene(tp.SceneConfig(seed=3, noise_sigma=0.0))
        pset = tp.tda_prompts(img, min_persistence=None, budget=4096)
        assert 80 <= len(pset) <= 120

    def test_scores_sorted_descending(self):
        rng = np.random.default_rng(8)
        img = tp.ScalarImage(20, 20, rng.uniform(0, 1, 400))
        pset = tp.tda_prompts(img, min_persistence=0.0)
        scores = [p.score for p in pset.points]
        assert scores == sorted(scores, reverse=True)
        assert scores[0] == math.inf

    def test_affine_intensity_invariance(self):
        rng = np.random.default_rng(17)
        vals = rng.uniform(0, 1, 30 * 20)
        base = tp.tda_prompts(tp.ScalarImage(30, 20, vals), min_persistence=0.02)
        for a, b in [(3.0, -2.0), (0.25, 10.0)]:
            other = tp.tda_prompts(tp.ScalarImage(30, 20, a * vals + b),
                                   min_persistence=0.02)
            assert other.coords() == base.coords()

    def test_translation_equivariance_under_padding(self):
        rng = np.random.default_rng(23)
        arr = rng.uniform(0.2, 1.0, size=(15, 11))
        base = tp.tda_prompts(tp.ScalarImage.from_array(arr), min_persistence=0.05)
        pad = 4
        padded = np.pad(arr, pad, mode="constant", constant_values=arr.min())
        shifted = tp.tda_prompts(tp.ScalarImage.from_array(padded),
                                 min_persistence=0.05)
        assert shifted.coords() == [(x + pad, y + pad) for x, y in base.coords()]

    def test_budget_prefix(self):
        rng = np.random.default_rng(29)
        img = tp.ScalarImage(40, 40, rng.uniform(0, 1, 1600))
        for k in (1, 5, 20):
            small = tp.tda_prompts(img, budget=k, min_persistence=0.0)
            big = tp.tda_prompts(img, budget=k + 7, min_persistence=0.0)
            assert big.coords()[:len(small)] == small.coords()

    def test_invert_finds_dark_objects(self):
        arr = np.full((9, 9), 0.9)
        arr[4, 4] = 0.1  # dark blob on bright background
        pset = tp.tda_prompts(tp.ScalarImage.from_array(arr), budget=1,
                              invert=True)
        assert pset.coords() == [(4, 4)]


class TestGridPrompts:
    def test_grid16_has_256_points(self):
        pset = tp.grid_prompts(1024, 1024, 16)
        assert len(pset) == 256
        assert pset.points[0] == tp.PromptPoint(x=32, y=32, label=1, score=0.0,
                                                rank=0)

    def test_grid64_has_4096_points(self):
        assert len(tp.grid_prompts(1024, 1024, 64)) == 4096

    def test_single_cell_center(self):
        pset = tp.grid_prompts(100, 100, 1)
        assert pset.coords() == [(50, 50)]

    def test_row_major_order(self):
        pset = tp.grid_prompts(100, 60, 2)
        assert pset.coords() == [(25, 15), (75, 15), (25, 45), (75, 45)]

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 12), st.integers(12, 300), st.integers(12, 300))
    def test_always_n_squared_in_bounds(self, n, w, h):
        pset = tp.grid_prompts(w, h, n)
        assert len(pset) == n * n
        assert all(0 <= p.x < w and 0 <= p.y < h for p in pset.points)

    def test_overdense_grid_rejected(self):
        with pytest.raises(ValueError):
            tp.grid_prompts(4, 4, 9)


class TestRandomPrompts:
    def test_deterministic_across_runs(self):
        a = tp.random_prompts(1024, 1024, 4096, seed=5)
        b = tp.random_prompts(1024, 1024, 4096, seed=5)
        assert a == b
        assert len({(p.x, p.y) for p in a.points}) == 4096

    def test_count_zero(self):
        assert len(tp.random_prompts(10, 10, 0, seed=1)) == 0

    def test_different_seeds_differ(self):
        a = tp.random_prompts(1024, 1024, 1024, seed=1)
        b = tp.random_prompts(1024, 1024, 1024, seed=2)
        assert {(p.x, p.y) for p in a.points} != {(p.x, p.y) for p in b.points}

    def test_budget_exceeds_pixels(self):
        with pytest.raises(BudgetExceedsPixelsError):
            tp.random_prompts(4, 4, 17, seed=0)

    def test_exhaustive_draw_terminates(self):
        pset = tp.random_prompts(4, 4, 16, seed=9)
        assert {(p.x, p.y) for p in pset.points} == {(x, y) for x in range(4)
                                                     for y in range(4)}


class TestPromptSetValidation:
    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            tp.PromptSet((tp.PromptPoint(5, 0, rank=0),), "grid", {"n": 1}, 5, 5)

    def test_duplicate_rejected(self):
        pts = (tp.PromptPoint(1, 1, rank=0), tp.PromptPoint(1, 1, rank=1))
        with pytest.raises(ValueError):
            tp.PromptSet(pts, "grid", {"n": 2}, 5, 5)

    def test_rank_gap_rejected(self):
        pts = (tp.PromptPoint(0, 0, rank=0), tp.PromptPoint(1, 0, rank=2))
        with pytest.raises(ValueError):
            tp.PromptSet(pts, "grid", {"n": 2}, 5, 5)


def random_prompt_set(rng):
    w = int(rng.integers(2, 50))
    h = int(rng.integers(2, 50))
    n = int(rng.integers(0, min(20, w * h)))
    coords = rng.choice(w * h, size=n, replace=False)
    generator = ("tda", "grid", "random")[int(rng.integers(0, 3))]
    scores = [float(np.round(rng.uniform(0, 5), 6)) for _ in range(n)]
    if generator == "tda":
        # the type requires significance order for this generator
        scores = sorted(scores, reverse=True)
        if scores:
            scores[0] = math.inf
    points = tuple(
        tp.PromptPoint(x=int(c % w), y=int(c // w), label=1, score=scores[i],
                       rank=i)
        for i, c in enumerate(coords)
    )
    params = {"budget": int(rng.integers(0, 100)), "sigma": 1.5,
              "invert": bool(rng.integers(0, 2)), "note": None}
    source = None if rng.integers(0, 2) else "imgs/cell.png"
    return tp.PromptSet(points, generator, params, w, h, source)


class TestJsonRoundTrip:
    def test_fifty_random_sets(self, tmp_path):
        rng = np.random.default_rng(1234)
        for i in range(50):
            pset = random_prompt_set(rng)
            path = tmp_path / f"p{i}.json"
            tp.export_prompts(pset, path)
            assert tp.import_prompts(path) == pset

    def test_empty_set_is_valid_json(self):
        pset = tp.PromptSet((), "grid", {"n": 0}, 8, 8)
        doc = json.loads(prompt_set_to_json(pset))
        assert doc["schema"] == "topoprompt/v1"
        assert doc["points"] == []
        assert prompt_set_from_json(prompt_set_to_json(pset)) == pset

    def test_infinite_score_serialized_as_literal(self, row_image):
        pset = tp.tda_prompts(row_image, budget=2, min_persistence=0.0)
        doc = json.loads(prompt_set_to_json(pset))
        assert doc["points"][0]["score"] == "inf"
        assert prompt_set_from_json(prompt_set_to_json(pset)) == pset

    def test_point_at_width_rejected(self):
        doc = {
            "schema": "topoprompt/v1",
            "image": {"width": 4, "height": 4, "source": None},
            "generator": "grid", "params": {},
            "points": [{"x": 4, "y": 0, "label": 1, "score": 0.0, "rank": 0}],
        }
        with pytest.raises(SchemaError):
            prompt_set_from_json(json.dumps(doc))

    def test_wrong_schema_tag_rejected(self):
        with pytest.raises(SchemaError):
            prompt_set_from_json(json.dumps({"schema": "topoprompt/v2"}))

    def test_garbage_rejected(self):
        with pytest.raises(SchemaError):
            prompt_set_from_json("{not json")

    def test_unsorted_tda_scores_rejected(self):
        doc = {
            "schema": "topoprompt/v1",
            "image": {"width": 4, "height": 4, "source": None},
            "generator": "tda", "params": {},
            "points": [
                {"x": 0, "y": 0, "label": 1, "score": 1.0, "rank": 0},
                {"x": 1, "y": 0, "label": 1, "score": 2.0, "rank": 1},
            ],
        }
        with pytest.raises(SchemaError):
            prompt_set_from_json(json.dumps(doc))

    def test_non_foreground_label_rejected(self):
        doc = {
            "schema": "topoprompt/v1",
            "image": {"width": 4, "height": 4, "source": None},
            "generator": "grid", "params": {},
            "points": [{"x": 0, "y": 0, "label": 0, "score": 0.0, "rank": 0}],
        }
        with pytest.raises(SchemaError):
            prompt_set_from_json(json.dumps(doc))
