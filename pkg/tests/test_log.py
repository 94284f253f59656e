"""
Tests for the console log module.
"""
import pytest
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from netfair.utils import log


@pytest.fixture(autouse=True)
def reset_log_settings():
    yield
    log.set_verbosity(False)
    log.set_log_file(None)


class TestRenderValue:
    """Tests for render_value."""

    def test_fraction_shows_ratio_and_percent(self):
        assert log.render_value(Fraction(1, 2)) == '1/2 (50.0%)'

    def test_missing_value(self):
        assert log.render_value(None) == 'n/a'

    def test_float_four_places(self):
        assert log.render_value(0.123456) == '0.1235'

    def test_other_values_use_str(self):
        assert log.render_value(7) == '7'
        assert log.render_value('x') == 'x'


class TestLevels:
    """Tests for stream routing and verbosity."""

    def test_warn_goes_to_stderr(self, capsys):
        log.warn("disconnected")
        captured = capsys.readouterr()
        assert captured.out == ''
        assert captured.err == 'Warning: disconnected\n'

    def test_error_goes_to_stderr(self, capsys):
        log.error("bad row")
        assert capsys.readouterr().err == 'Error: bad row\n'

    def test_debug_silent_unless_verbose(self, capsys):
        log.debug("hidden")
        assert capsys.readouterr().out == ''
        log.set_verbosity(True)
        log.debug("shown")
        assert capsys.readouterr().out == 'shown\n'

    def test_log_file_receives_lines(self, tmp_path, capsys):
        target = tmp_path / 'logs' / 'run.log'
        log.set_log_file(str(target))
        log.info("first")
        log.warn("second")
        capsys.readouterr()
        assert target.read_text(encoding='utf-8') == 'first\nWarning: second\n'


class TestGroupLines:
    """Tests for per-group lines and multi-line reports."""

    def test_group_line_format(self, capsys):
        log.group_line(0, fv=Fraction(1, 4), eligible=4, size=5)
        assert capsys.readouterr().out == '  group 0: fv=1/4 (25.0%) eligible=4 size=5\n'

    def test_group_line_missing_visibility(self, capsys):
        log.group_line('x', fv=None)
        assert capsys.readouterr().out == '  group x: fv=n/a\n'

    def test_report_indents_each_line(self, capsys):
        log.report("a: 1\nb: 2")
        assert capsys.readouterr().out == '  a: 1\n  b: 2\n'

    def test_verbose_only_report(self, capsys):
        log.report("detail", verbose_only=True)
        assert capsys.readouterr().out == ''
        log.set_verbosity(True)
        log.report("detail", verbose_only=True)
        assert capsys.readouterr().out == '  detail\n'
