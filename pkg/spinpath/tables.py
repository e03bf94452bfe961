"""CSV tables and their ``.meta`` sidecars.

Floats are written with :func:`repr` and counts as integers (or floats in
expected-count mode), so reading a table back gives the same values bit for
bit. Files are UTF-8 with LF line endings.
"""
import csv
import io
import logging

from . import schema
from .analysis import AdjustedAngles, ScanResult
from .errors import ValidationError
from .experiment import BeamBlockScan, ExperimentConfig, Interferogram


log = logging.getLogger(__name__)

INTERFEROGRAM_HEADER = ('chi_rad', 'counts')
BEAM_BLOCK_HEADER = ('delta_rad', 'counts')
SCAN_HEADER = ('gamma_rad', 'beta1_rad', 'beta1p_rad', 'alpha2p_rad', 's', 'sigma_s',
               'method')
META_SUFFIX = '.meta'

_COUNT = schema.CountField()


def format_cell(value):
    if value is None:
        return ''
    return schema.keyvalue.format_value(value)


def write_table(path, header, rows):
    """Write ``rows`` (sequences matching ``header``) as CSV."""
    with io.open(path, 'w', encoding='utf-8', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValidationError(None, 'row {0!r} does not match header {1}'.format(
                    row, ','.join(header)))
            writer.writerow([format_cell(value) for value in row])
    log.debug('wrote %s', path)
    return path


def read_table(path, header):
    """Read a CSV written by :func:`write_table` as a list of dicts."""
    with io.open(path, 'r', encoding='utf-8', newline='') as stream:
        reader = csv.DictReader(stream)
        if tuple(reader.fieldnames or ()) != tuple(header):
            raise ValidationError(None, '{0}: expected header {1}, got {2}'.format(
                path, ','.join(header), ','.join(reader.fieldnames or ())))
        return list(reader)


def _meta(record, *skip):
    data = record.to_serial()
    for key in skip:
        data.pop(key)
    if data.get('config') is None:
        data.pop('config')
    return data


def _split_config(meta):
    names = ExperimentConfig.get_class_fields()
    config = dict((key, meta.pop(key)) for key in list(meta) if key in names)
    return ExperimentConfig(config) if config else None


def write_interferogram(gram, path):
    """``chi_rad,counts`` rows plus a sidecar holding δ, γ, the flipper
    state and the configuration."""
    write_table(path, INTERFEROGRAM_HEADER, zip(gram.chi_values, gram.counts))
    schema.dump(_meta(gram, 'chi_values', 'counts'), path + META_SUFFIX)
    return path


def read_interferogram(path):
    rows = read_table(path, INTERFEROGRAM_HEADER)
    meta = schema.load(path + META_SUFFIX)
    config = _split_config(meta)
    return Interferogram(meta, chi_values=[float(row['chi_rad']) for row in rows],
                         counts=[_COUNT.to_python(row['counts']) for row in rows],
                         config=config)


def write_beam_block(scan, path):
    write_table(path, BEAM_BLOCK_HEADER, zip(scan.delta_values, scan.counts))
    schema.dump(_meta(scan, 'delta_values', 'counts'), path + META_SUFFIX)
    return path


def read_beam_block(path):
    rows = read_table(path, BEAM_BLOCK_HEADER)
    meta = schema.load(path + META_SUFFIX)
    config = _split_config(meta)
    return BeamBlockScan(meta, delta_values=[float(row['delta_rad']) for row in rows],
                         counts=[_COUNT.to_python(row['counts']) for row in rows],
                         config=config)


def write_scan_results(results, path):
    """One row per result; angles a scan did not adjust are left empty."""
    rows = []
    for result in results:
        angles = result.adjusted_angles
        rows.append((result.gamma, angles.beta1, angles.beta1_p, angles.alpha2_p,
                     result.s, result.sigma_s, result.method))
    return write_table(path, SCAN_HEADER, rows)


def read_scan_results(path):
    results = []
    for row in read_table(path, SCAN_HEADER):
        angles = AdjustedAngles(beta1=row['beta1_rad'], beta1_p=row['beta1p_rad'],
                                alpha2_p=row['alpha2p_rad'])
        results.append(ScanResult(gamma=row['gamma_rad'], adjusted_angles=angles,
                                  s=row['s'], sigma_s=row['sigma_s'],
                                  method=row['method']))
    return results
