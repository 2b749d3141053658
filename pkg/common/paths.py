# common/paths.py
from pathlib import Path

OUT_DIR     = Path("out")
PATHS_DIR   = "paths"
REPORTS_DIR = "reports"

def ensure_dirs(out_dir: Path | str = OUT_DIR) -> tuple[Path, Path]:
    """Crea <out>/paths y <out>/reports si no existen (idempotente)."""
    base = Path(out_dir)
    paths_dir = base / PATHS_DIR
    reports_dir = base / REPORTS_DIR
    for d in (paths_dir, reports_dir):
        d.mkdir(parents=True, exist_ok=True)
    return paths_dir, reports_dir
