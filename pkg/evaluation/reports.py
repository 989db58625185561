#!/usr/bin/env python3
# -*- coding = utf-8 -*-
import io
import sys
import json
import math
import logging

import numpy as np
import pandas as pd

from util import InvalidParameters
from bounds.evaluate import REPORT_FIELDS, BoundReport

__all__ = ['JSON', 'CSV', 'format_number', 'report_frame', 'emit_report', 'write_report']

logger = logging.getLogger(__name__)

JSON = 'json'
CSV = 'csv'

def format_number(value) -> str:
   """Seventeen significant digits, enough to read back the same double."""
   return format(float(value), '.17g')

def _encode(value) -> str:
   """JSON text for a report value, keeping dict order and printing floats exactly."""
   if value is None:
      return 'null'
   if isinstance(value, (bool, np.bool_)):
      return 'true' if value else 'false'
   if isinstance(value, (int, np.integer)):
      return str(int(value))
   if isinstance(value, (float, np.floating)):
      # JSON has no infinities, they print as null.
      return format_number(value) if math.isfinite(value) else 'null'
   if isinstance(value, str):
      return json.dumps(value)
   if isinstance(value, dict):
      return '{' + ', '.join(f'{json.dumps(str(k))}: {_encode(v)}' for k, v in value.items()) + '}'
   if isinstance(value, (list, tuple, np.ndarray)):
      return '[' + ', '.join(_encode(v) for v in value) + ']'
   if hasattr(value, 'to_dict'):
      return _encode(value.to_dict())
   raise InvalidParameters(f"Cannot serialize a value of type {type(value).__name__}.")

def _as_dict(report):
   return report.to_dict() if hasattr(report, 'to_dict') else dict(report)

def report_frame(reports) -> pd.DataFrame:
   """One row per report. Bound reports keep the fixed column order, anything else its own keys."""
   reports = list(reports)
   if not reports or all(isinstance(r, BoundReport) for r in reports):
      return pd.DataFrame([r.to_dict() for r in reports], columns = REPORT_FIELDS)
   rows = [_as_dict(r) for r in reports]
   columns = list(dict.fromkeys(k for row in rows for k in row))

   # Nested values go into a single cell as JSON.
   flat = [{k: _encode(v) if isinstance(v, (dict, list, tuple)) else v for k, v in row.items()} for row in rows]
   return pd.DataFrame(flat, columns = columns)

def emit_report(reports, fmt = JSON) -> bytes:
   """Serialize reports to JSON (an array of objects) or CSV (one row per report)."""
   reports = list(reports)
   if fmt == JSON:
      if not reports:
         return b'[]\n'
      body = ',\n'.join('  ' + _encode(_as_dict(r)) for r in reports)
      return ('[\n' + body + '\n]\n').encode('utf-8')
   if fmt == CSV:
      buffer = io.StringIO()
      report_frame(reports).to_csv(buffer, index = False, float_format = '%.17g',
                                   lineterminator = '\n', na_rep = '')
      return buffer.getvalue().encode('utf-8')
   raise InvalidParameters(f"Invalid output format {fmt!r}, should be '{JSON}' or '{CSV}'.")

def write_report(reports, path = None, fmt = JSON) -> None:
   """Write the serialized reports to a file, or to standard output when no path is given."""
   data = emit_report(reports, fmt)
   if path is None:
      sys.stdout.buffer.write(data)
      sys.stdout.flush()
      return
   with open(path, 'wb') as file:
      file.write(data)
   logger.info("Wrote %d bytes of %s to %s.", len(data), fmt, path)
