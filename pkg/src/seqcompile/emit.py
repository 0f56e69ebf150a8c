"""
Schedule file formats

JSON: the schedule model with sorted keys under a version envelope.
CSV: one row per AOM segment per repetition plus one row per EOM tone,
preceded by a ``# afcmem-schedule v1 key=value ...`` line carrying the
schedule-level settings. Both formats parse back to an equal schedule.
"""
import io
import json
from pathlib import Path
from typing import Dict, Union

import pandas as pd

from ..core.errors import ConfigError, OutputError
from ..core.logging_config import get_logger
from .schedule import AomSegment, EomTone, RFSchedule

logger = get_logger(__name__)

FORMAT_NAME = "afcmem-schedule"
FORMAT_VERSION = 1

CSV_COLUMNS = [
    'channel', 't_start_ms', 't_stop_ms', 'f_start_MHz', 'f_stop_MHz', 'envelope',
    'amplitude', 'repetition', 'tone', 'window', 'spacing_MHz',
]

_META_FIELDS = ('mode', 'repetitions', 'aom_center', 'double_pass', 'etalon_center',
                'etalon_bandwidth', 'eom_extinction', 'carrier_blocked')


def _to_json(schedule: RFSchedule) -> str:
    document = {
        'format': FORMAT_NAME,
        'version': FORMAT_VERSION,
        'schedule': schedule.model_dump(mode='json'),
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _meta_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(getattr(value, 'value', value))


def _to_csv(schedule: RFSchedule) -> str:
    rows = []
    period = schedule.repetition_ms
    for rep in range(schedule.repetitions):
        shift = rep * period
        for seg in schedule.aom_segments:
            rows.append(['aom', seg.t_start_ms + shift, seg.t_stop_ms + shift, seg.f_start_MHz,
                         seg.f_stop_MHz, seg.envelope.value, seg.amplitude, rep, seg.tone,
                         seg.window, seg.spacing])
    for index, tone in enumerate(schedule.eom_tones):
        rows.append(['eom', 0.0, schedule.total_duration_ms, tone.frequency_MHz,
                     tone.frequency_MHz, 'cw', tone.amplitude, -1, index, -1, 0.0])

    meta = " ".join(f"{name}={_meta_value(getattr(schedule, name))}" for name in _META_FIELDS)
    header = f"# {FORMAT_NAME} v{FORMAT_VERSION} segments={len(schedule.aom_segments)} {meta}\n"
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    return header + frame.to_csv(index=False, lineterminator="\n")


def dumps(schedule: RFSchedule, fmt: str = "json") -> str:
    """Serialize a schedule to text"""
    if fmt == "json":
        return _to_json(schedule)
    if fmt == "csv":
        return _to_csv(schedule)
    raise ConfigError([f"unknown schedule format '{fmt}'"])


def emit(schedule: RFSchedule, path: Union[str, Path], fmt: str = None) -> Path:
    """
    Write a schedule file.

    Args:
        schedule: Schedule to write
        path: Output file
        fmt: 'csv' or 'json', taken from the suffix when omitted
    """
    path = Path(path)
    fmt = fmt or path.suffix.lstrip('.').lower() or "json"
    text = dumps(schedule, fmt)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write schedule to {path}: {e.strerror or e}")
    logger.info(f"Wrote {fmt} schedule to {path}")
    return path


def _parse_meta(line: str) -> Dict[str, str]:
    parts = line.lstrip('#').split()
    if len(parts) < 2 or parts[0] != FORMAT_NAME or parts[1] != f"v{FORMAT_VERSION}":
        raise ConfigError([f"not an {FORMAT_NAME} v{FORMAT_VERSION} file"])
    meta = {}
    for item in parts[2:]:
        key, _, value = item.partition('=')
        meta[key] = value
    return meta


def _from_csv(text: str) -> RFSchedule:
    first, _, body = text.partition("\n")
    meta = _parse_meta(first)
    frame = pd.read_csv(io.StringIO(body), float_precision='round_trip',
                        dtype={'channel': str, 'envelope': str})

    aom = frame[(frame['channel'] == 'aom') & (frame['repetition'] == 0)]
    segments = [
        AomSegment(t_start_ms=row.t_start_ms, t_stop_ms=row.t_stop_ms,
                   f_start_MHz=row.f_start_MHz, f_stop_MHz=row.f_stop_MHz,
                   envelope=row.envelope, amplitude=row.amplitude, tone=int(row.tone),
                   window=int(row.window), spacing=row.spacing_MHz)
        for row in aom.itertuples(index=False)
    ]
    eom = frame[frame['channel'] == 'eom'].sort_values('tone')
    tones = [EomTone(frequency_MHz=row.f_start_MHz, amplitude=row.amplitude)
             for row in eom.itertuples(index=False)]

    expected = int(meta.pop('segments', len(segments)))
    if expected != len(segments) and int(meta.get('repetitions', 0)) > 0:
        raise ConfigError([f"schedule lists {expected} segments, file holds {len(segments)}"])

    fields = {key: (None if value == "none" else value) for key, value in meta.items()}
    return RFSchedule.model_validate({**fields, 'aom_segments': segments, 'eom_tones': tones})


def parse(source: Union[str, Path], fmt: str = None) -> RFSchedule:
    """
    Read a schedule from a file path or from text.

    Args:
        source: Path, or the file content itself
        fmt: 'csv' or 'json'; guessed from the suffix or content when omitted
    """
    text = source
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and Path(source).exists()):
        path = Path(source)
        fmt = fmt or path.suffix.lstrip('.').lower()
        text = path.read_text(encoding="utf-8")
    fmt = fmt or ("csv" if text.lstrip().startswith("#") else "json")

    if fmt == "csv":
        return _from_csv(text)
    document = json.loads(text)
    if document.get('format') != FORMAT_NAME or document.get('version') != FORMAT_VERSION:
        raise ConfigError([f"not an {FORMAT_NAME} v{FORMAT_VERSION} document"])
    return RFSchedule.model_validate(document['schedule'])
