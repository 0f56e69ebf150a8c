"""
Staged output directory

Commands write every artifact into a scratch directory next to the final
output directory and only move them into place once the whole command
has succeeded, so a failed run leaves nothing behind.
"""
import json
import shutil
import tempfile
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from .errors import OutputError
from .logging_config import get_logger

logger = get_logger(__name__)

# Stable float formatting keeps CSV output byte-identical across runs
CSV_FLOAT_FORMAT = "%.10g"


class StagedOutput:
    """
    Context manager collecting output files for one command.

    Usage:
        with StagedOutput(out_dir) as out:
            out.write_csv("spectrum.csv", frame)
    """

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self._stage: Path = None
        self._written: List[str] = []

    def __enter__(self) -> 'StagedOutput':
        parent = self.out_dir.parent
        try:
            parent.mkdir(parents=True, exist_ok=True)
            self._stage = Path(tempfile.mkdtemp(prefix=".afcmem-", dir=parent))
        except OSError as e:
            raise OutputError(f"cannot stage outputs under {parent}: {e}")
        return self

    def __exit__(self, exc_type, exc, tb):
        try:
            if exc_type is None:
                self._commit()
        finally:
            shutil.rmtree(self._stage, ignore_errors=True)
        return False

    def path(self, name: str) -> Path:
        """Staged path for an output file"""
        self._written.append(name)
        return self._stage / name

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        """Write a DataFrame as CSV with stable float formatting"""
        target = self.path(name)
        frame.to_csv(target, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        return target

    def write_json(self, name: str, data: Dict[str, Any]) -> Path:
        """Write a JSON document with sorted keys"""
        target = self.path(name)
        target.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return target

    def write_text(self, name: str, text: str) -> Path:
        target = self.path(name)
        target.write_text(text, encoding="utf-8")
        return target

    @property
    def files(self) -> List[str]:
        return list(self._written)

    def _commit(self):
        if not self.out_dir.exists():
            self._rename_stage()
        else:
            self._replace_files()
        logger.info(f"Wrote {len(self._written)} files to {self.out_dir}")

    def _rename_stage(self):
        """Fresh output directory: the staged directory is renamed into place in one step"""
        try:
            self._stage.chmod(0o755)
            self._stage.rename(self.out_dir)
        except OSError as e:
            raise OutputError(f"cannot write outputs to {self.out_dir}: {e}")

    def _replace_files(self):
        """Existing output directory: move files in, restoring the old ones on failure"""
        backup = self._stage / ".previous"
        moved: List[str] = []
        try:
            backup.mkdir()
            for name in dict.fromkeys(self._written):
                src = self._stage / name
                if not src.exists():
                    continue
                dst = self.out_dir / name
                if dst.exists():
                    shutil.move(str(dst), str(backup / name))
                moved.append(name)
                shutil.move(str(src), str(dst))
        except OSError as e:
            for name in reversed(moved):
                dst = self.out_dir / name
                try:
                    if dst.exists():
                        dst.unlink()
                    if (backup / name).exists():
                        shutil.move(str(backup / name), str(dst))
                except OSError:
                    logger.error(f"Could not restore {dst}")
            raise OutputError(f"cannot write outputs to {self.out_dir}: {e}")
