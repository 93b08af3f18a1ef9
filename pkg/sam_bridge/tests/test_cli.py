import json

from sam_bridge import cli, load_result

from conftest import DiskSegmenter


class TestUsage:
    def test_missing_required_arguments(self, capsys):
        assert cli.main([]) == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert cli.main(["--image", "a", "--prompts", "b", "--checkpoint", "c",
                         "--out", "d", "--wat"]) == 1

    def test_bad_device(self, capsys):
        assert cli.main(["--image", "a", "--prompts", "b", "--checkpoint", "c",
                         "--out", "d", "--device", "tpu"]) == 1


class TestRuntimeErrors:
    def test_missing_checkpoint(self, gray_image, prompt_file_factory, capsys,
                                tmp_path):
        prompts = prompt_file_factory([(5, 5)])
        code = cli.main(["--image", str(gray_image), "--prompts", str(prompts),
                         "--checkpoint", str(tmp_path / "none.pth"),
                         "--out", str(tmp_path / "r.json")])
        assert code == 2
        assert "checkpoint" in capsys.readouterr().err

    def test_bad_prompt_json(self, gray_image, tmp_path, capsys):
        prompts = tmp_path / "p.json"
        prompts.write_text(json.dumps({"schema": "other"}))
        code = cli.main(["--image", str(gray_image), "--prompts", str(prompts),
                         "--checkpoint", str(tmp_path / "none.pth"),
                         "--out", str(tmp_path / "r.json")])
        assert code == 2


class TestEndToEnd:
    def test_full_run_with_injected_segmenter(self, gray_image,
                                              prompt_file_factory, tmp_path,
                                              monkeypatch, capsys):
        monkeypatch.setattr(cli, "_build_segmenter",
                            lambda args: DiskSegmenter(radius=3))
        prompts = prompt_file_factory([(12, 12), (40, 20), (40, 20)])
        out = tmp_path / "r.json"
        overlay = tmp_path / "o.png"
        code = cli.main(["--image", str(gray_image), "--prompts", str(prompts),
                         "--checkpoint", "fake.pth", "--out", str(out),
                         "--overlay", str(overlay)])
        assert code == 0
        doc = load_result(out)
        assert doc["aggregate"]["prompt_count"] == 3
        assert doc["aggregate"]["mask_count"] == 2  # repeated prompt deduped
        assert overlay.exists()
        assert "masks from 3 prompts" in capsys.readouterr().err
