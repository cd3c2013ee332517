"""Pass/fail lines collected by the acceptance suite and printed at the end."""

LINES: dict = {}


def record(key: int, ok: bool, detail: str) -> None:
    LINES[key] = f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}"
