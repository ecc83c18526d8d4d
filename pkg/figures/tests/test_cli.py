import os

from pairfigs.cli import main


def test_cli_spectra_from_directories(outputs, tmp_path, capsys):
    out = str(tmp_path / "fig1.pdf")
    rc = main(["spectra", str(outputs["sweep_lambda"]), str(outputs["lda"]),
               "--out", out])
    assert rc == 0
    assert os.path.getsize(out) > 0
    assert capsys.readouterr().out.strip() == out


def test_cli_spectra_panels(outputs, tmp_path):
    out = str(tmp_path / "fig5.pdf")
    rc = main(["spectra", str(outputs["sweep_b"]), "--panel-by", "b",
               "--out", out])
    assert rc == 0
    assert os.path.exists(out)


def test_cli_yield_from_directory(outputs, tmp_path):
    out = str(tmp_path / "fig4.pdf")
    rc = main(["yield", str(outputs["sweep_lambda_b"]), "--out", out])
    assert rc == 0
    assert os.path.exists(out)


def test_cli_error_exit_code(tmp_path, capsys):
    rc = main(["spectra", str(tmp_path / "missing"), "--out",
               str(tmp_path / "x.pdf")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
