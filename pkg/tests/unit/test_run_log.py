"""
Unit tests for RunLogger

The run log is a TSV file per run:
- check outcomes map to log levels
- new columns widen the header in place
- the file rotates past max_log_size
"""

import shutil
import tempfile
from pathlib import Path

import pytest


class TestRunLogger:
    """Test the per-run TSV log"""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def test_log_location(self):
        """Should write logs/{run_id}/log.tsv under the base directory"""
        from weylscope.storage import RunLogger

        logger = RunLogger("verify-test", self.temp_dir)
        logger.info("started")

        path = Path(self.temp_dir) / "logs" / "verify-test" / "log.tsv"
        assert path.exists()
        assert path.read_text().splitlines()[0] == "timestamp\tlevel\tmessage"

    def test_check_levels(self):
        """Should log failures at ERROR and warnings at WARNING"""
        from weylscope.storage import RunLogger

        logger = RunLogger("run", self.temp_dir)
        logger.check("phase-core", "a", "pass", 0.1)
        logger.check("phase-core", "b", "fail", 0.2)
        logger.check("phase-core", "c", "warn-tail", 0.3)

        assert [e["check"] for e in logger.get_logs(level="ERROR")] == ["b"]
        assert [e["check"] for e in logger.get_logs(level="WARNING")] == ["c"]
        assert logger.get_logs(check="a")[0]["runtime"] == "0.100"

    def test_columns_widen(self):
        """Should keep earlier rows readable after a new column appears"""
        from weylscope.storage import RunLogger

        logger = RunLogger("run", self.temp_dir)
        logger.info("plain")
        logger.info("with suite", suite="weyl-calculus")

        entries = logger.get_logs()
        assert len(entries) == 2
        assert entries[0]["suite"] == ""
        assert entries[1]["suite"] == "weyl-calculus"

    def test_filters(self):
        """Should filter by level list, columns, limit and offset"""
        from weylscope.storage import RunLogger

        logger = RunLogger("run", self.temp_dir)
        for k in range(4):
            logger.debug(f"step {k}", suite="stft-symbols")
        logger.error("broken", suite="bargmann")

        assert len(logger.get_logs(level=["DEBUG", "ERROR"])) == 5
        assert len(logger.get_logs(suite="bargmann")) == 1
        assert [e["message"] for e in logger.get_logs(limit=2, offset=1)] == ["step 1", "step 2"]

    def test_invalid_level(self):
        """Should refuse an unknown level"""
        from weylscope.storage import RunLogger

        with pytest.raises(ValueError):
            RunLogger("run", self.temp_dir).log("LOUD", "x")

    def test_rotation(self):
        """Should rotate the file once it exceeds max_log_size"""
        from weylscope.storage import RunLogger

        logger = RunLogger("run", self.temp_dir, max_log_size=100)
        for k in range(5):
            logger.info("x" * 60)

        rotated = list((Path(self.temp_dir) / "logs" / "run").glob("log-*.tsv"))
        assert rotated
        assert len(logger.get_logs()) == 5
