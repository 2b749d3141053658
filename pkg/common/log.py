# common/log.py
"""
Salida de progreso: líneas "[tag] mensaje" en stdout.
"""

def log(tag: str, msg: str) -> None:
    print(f"[{tag}] {msg}", flush=True)

def warn(msg: str) -> None:
    print(f"[WARN] {msg}", flush=True)
