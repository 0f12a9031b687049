"""
Report Archive

Every emitted report.json is archived so runs can be compared by hash.

Design:
- versions/{name}/metadata.tsv - version_id, run_id, message, hash
- versions/{name}/v1.json, v2.json, ... - archived report content
- The hash is the sha256 of the exact bytes written, so two byte-identical
  reports share a hash
- Append-only; nothing is ever rewritten
"""

import csv
import hashlib
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.errors import ReportError

METADATA_FIELDS = ['version_id', 'timestamp', 'run_id', 'message', 'hash']


class ReportArchive:
    """
    Versioned copies of report.json under versions/{name}/.
    """

    def __init__(self, base_dir: Union[Path, str], name: str = 'report'):
        """
        Args:
            base_dir: Directory holding versions/
            name: Archive name (one sequence of versions per name)
        """
        self.base_dir = Path(base_dir)
        self.name = name
        self.archive_dir = self.base_dir / 'versions' / name
        try:
            self.archive_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ReportError(f"cannot create archive directory ({e.strerror})", self.archive_dir) from e
        self.metadata_file = self.archive_dir / 'metadata.tsv'

    def save(self, content: str, run_id: str = '', message: str = '',
             timestamp: str = '') -> int:
        """
        Archive one report.

        Args:
            content: The report text
            run_id: Run that produced it
            message: Free text
            timestamp: Stored as given (empty keeps the archive reproducible)

        Returns:
            The version ID (1, 2, 3, ...)
        """
        version_id = self._next_version_id()
        content_file = self.archive_dir / f'v{version_id}.json'
        is_new_file = not self.metadata_file.exists()
        try:
            content_file.write_text(content)
            with open(self.metadata_file, 'a', newline='') as f:
                writer = csv.DictWriter(f, fieldnames=METADATA_FIELDS, delimiter='\t')
                if is_new_file:
                    writer.writeheader()
                writer.writerow({
                    'version_id': version_id,
                    'timestamp': timestamp,
                    'run_id': run_id,
                    'message': message,
                    'hash': content_hash(content),
                })
        except OSError as e:
            raise ReportError(f"cannot archive report ({e.strerror})", content_file) from e
        return version_id

    def latest_hash(self) -> Optional[str]:
        versions = self._read_metadata()
        return versions[-1]['hash'] if versions else None

    def same_as_previous(self) -> bool:
        """Whether the two most recent versions have the same hash"""
        versions = self._read_metadata()
        return len(versions) >= 2 and versions[-1]['hash'] == versions[-2]['hash']

    def _read_metadata(self) -> List[Dict[str, Any]]:
        if not self.metadata_file.exists():
            return []
        with open(self.metadata_file, 'r', newline='') as f:
            rows = list(csv.DictReader(f, delimiter='\t'))
        for row in rows:
            row['version_id'] = int(row['version_id'])
        return rows

    def _next_version_id(self) -> int:
        versions = self._read_metadata()
        return max((v['version_id'] for v in versions), default=0) + 1


def content_hash(content: str) -> str:
    """SHA-256 of the content"""
    return hashlib.sha256(content.encode()).hexdigest()
