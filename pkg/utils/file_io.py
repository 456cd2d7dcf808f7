"""
File I/O Utilities
Handles reading and writing of ring, F-symbol and result files
"""

import json
from pathlib import Path
from typing import Any, Iterable, Union

import config
from core.errors import DataError, StorageError


def load_json(path: Union[str, Path]) -> Any:
    """
    Read a JSON file

    Args:
        path: File to read

    Returns:
        Parsed content

    Raises:
        StorageError: the file cannot be read
        DataError: the file is not valid JSON
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise StorageError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise DataError(f"{path} is not valid JSON: {e}")


def save_json(data: Any, path: Union[str, Path]) -> Path:
    """
    Save data as a JSON file, creating parent directories

    Args:
        data: JSON-serializable content
        path: Output path; relative paths resolve against BASE_DIR

    Returns:
        Path to saved file
    """
    output_path = Path(path)
    if not output_path.is_absolute():
        output_path = config.BASE_DIR / output_path
    tmp_path = output_path.with_suffix(output_path.suffix + ".tmp")
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2)
        tmp_path.replace(output_path)
    except OSError as e:
        raise StorageError(f"cannot write {output_path}: {e}")
    return output_path


def read_ring_file(path: Union[str, Path]) -> dict:
    """Raw ring definition; validation happens in the catalog."""
    data = load_json(path)
    if not isinstance(data, dict):
        raise DataError(f"ring file {path} must hold a JSON object")
    return data


def dump_system(lines: Iterable[str], path: Union[str, Path]) -> Path:
    """Write one polynomial per line, for inspecting generated systems."""
    output_path = Path(path)
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            for line in lines:
                f.write(line + "\n")
    except OSError as e:
        raise StorageError(f"cannot write {output_path}: {e}")
    return output_path


def ensure_directories():
    """Ensure all required directories exist"""
    for directory in [config.RINGS_DIR, config.FSYMBOLS_DIR]:
        directory.mkdir(parents=True, exist_ok=True)
