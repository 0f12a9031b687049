"""
Run Logger

Each verification run logs to itself, next to its report.

Design:
- Logs stored in TSV files (human-readable, grep-able)
- Append-only
- One directory per run: logs/{run_id}/log.tsv
- Rotation when the file exceeds a size limit; rotated files are named
  log-{timestamp}-{k}.tsv and read back in order
- Query with filters (level, check, suite, status, ...)

The numerical modules never log; they warn. Only the suite runner and the
CLI write here.
"""

import csv
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')

BASE_FIELDS = ['timestamp', 'level', 'message']


class RunLogger:
    """
    TSV log of one verification run: logs/{run_id}/log.tsv under base_dir.
    """

    def __init__(
        self,
        run_id: str,
        base_dir: Union[Path, str],
        max_log_size: Optional[int] = None,
    ):
        """
        Args:
            run_id: Name of the run (e.g. 'verify-phase-core')
            base_dir: Directory holding logs/
            max_log_size: Size in bytes before rotation (default: 10MB)
        """
        self.run_id = run_id
        self.base_dir = Path(base_dir)
        self.max_log_size = max_log_size or (10 * 1024 * 1024)
        self.log_dir = self.base_dir / 'logs' / run_id
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.log_file = self.log_dir / 'log.tsv'

    def log(self, level: str, message: str, **fields) -> None:
        """
        Append an entry.

        Args:
            level: One of DEBUG, INFO, WARNING, ERROR, CRITICAL
            message: Free text
            **fields: Extra columns (check, suite, status, runtime, ...);
                None values are dropped
        """
        if level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
        self._rotate_if_needed()
        entry = {'timestamp': datetime.now().isoformat(), 'level': level, 'message': message}
        entry.update({k: v for k, v in fields.items() if v is not None})

        fieldnames = self._fieldnames()
        new_columns = [k for k in entry if k not in fieldnames]
        if new_columns and self.log_file.exists():
            self._rewrite_with(fieldnames + new_columns)
        fieldnames = fieldnames + new_columns

        is_new_file = not self.log_file.exists()
        with open(self.log_file, 'a', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, delimiter='\t', restval='')
            if is_new_file:
                writer.writeheader()
            writer.writerow(entry)

    def debug(self, message: str, **fields) -> None:
        self.log('DEBUG', message, **fields)

    def info(self, message: str, **fields) -> None:
        self.log('INFO', message, **fields)

    def warning(self, message: str, **fields) -> None:
        self.log('WARNING', message, **fields)

    def error(self, message: str, **fields) -> None:
        self.log('ERROR', message, **fields)

    def check(self, suite: str, name: str, status: str, runtime: float, **fields) -> None:
        """Log the outcome of one check; failures at ERROR, warnings at WARNING"""
        if status == 'fail':
            level = 'ERROR'
        elif status.startswith('warn'):
            level = 'WARNING'
        else:
            level = 'INFO'
        self.log(level, f"{suite}/{name}: {status}", suite=suite, check=name, status=status,
                 runtime=f"{runtime:.3f}", **fields)

    def get_logs(
        self,
        level: Optional[Union[str, List[str]]] = None,
        limit: Optional[int] = None,
        offset: int = 0,
        **filters,
    ) -> List[Dict[str, Any]]:
        """
        Read entries back, oldest first.

        Args:
            level: Level or list of levels to keep
            limit: Maximum number of entries
            offset: Entries to skip
            **filters: Column equality filters (e.g. suite='weyl')
        """
        files = sorted(self.log_dir.glob('log-*.tsv'))
        if self.log_file.exists():
            files.append(self.log_file)
        entries: List[Dict[str, Any]] = []
        for path in files:
            with open(path, 'r', newline='') as f:
                entries.extend(csv.DictReader(f, delimiter='\t'))

        if level is not None:
            levels = [level] if isinstance(level, str) else list(level)
            entries = [e for e in entries if e.get('level') in levels]
        for key, value in filters.items():
            entries = [e for e in entries if e.get(key) == value]

        entries = entries[offset:]
        if limit is not None:
            entries = entries[:limit]
        return entries

    def _fieldnames(self) -> List[str]:
        if not self.log_file.exists():
            return list(BASE_FIELDS)
        with open(self.log_file, 'r', newline='') as f:
            reader = csv.DictReader(f, delimiter='\t')
            return list(reader.fieldnames or BASE_FIELDS)

    def _rewrite_with(self, fieldnames: List[str]) -> None:
        """Widen the header of the current file so every row keeps its columns"""
        with open(self.log_file, 'r', newline='') as f:
            rows = list(csv.DictReader(f, delimiter='\t'))
        with open(self.log_file, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, delimiter='\t', restval='')
            writer.writeheader()
            writer.writerows(rows)

    def _rotate_if_needed(self) -> None:
        if not self.log_file.exists() or self.log_file.stat().st_size < self.max_log_size:
            return
        stamp = datetime.now().strftime('%Y%m%d-%H%M%S')
        k = len(list(self.log_dir.glob(f'log-{stamp}-*.tsv')))
        self.log_file.rename(self.log_dir / f'log-{stamp}-{k:03d}.tsv')
