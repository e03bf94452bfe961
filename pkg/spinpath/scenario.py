"""Scenarios: what one command-line run computes, and its manifest.

A scenario is a flat record. The experiment configuration is embedded in
the same key namespace, so a manifest is one ``key = value`` file that can
be fed back with ``--config`` to repeat the run exactly.
"""
import logging
import math

import numpy as np

from . import schema
from .chsh import SCHEMES
from .errors import ValidationError
from .experiment import ExperimentConfig, default_delta_grid, default_gamma_list


log = logging.getLogger(__name__)

KINDS = ('analytic', 'surface', 'simulate-interferogram', 'beam-block',
         'polar-scan', 'azimuthal-scan', 'bell-test')

# kinds that read the δ grid, and those that need it to cover [0, π]
USES_DELTAS = ('surface', 'simulate-interferogram', 'beam-block', 'polar-scan')
COVERING_DELTAS = ('surface', 'polar-scan')

ANALYTIC_POINTS = 25


def default_gammas(kind):
    if kind == 'analytic':
        return list(np.arange(ANALYTIC_POINTS) * (2.0 * math.pi / ANALYTIC_POINTS))
    return default_gamma_list()


class Scenario(schema.Model):
    """One run: its kind, the γ list and grids, and the configuration."""
    frozen = True

    kind = schema.ChoiceField(KINDS, required=True)
    config = schema.ModelField(ExperimentConfig, default=ExperimentConfig)
    gammas = schema.ListField(of_type=schema.AngleField(), default=list)
    deltas = schema.ListField(of_type=schema.AngleField(), default=list)
    chi_points = schema.IntegerField(minimum=5, default=32)
    chi_periods = schema.IntegerField(minimum=1, default=2)
    scheme = schema.ChoiceField(SCHEMES, default='none')
    workers = schema.IntegerField(minimum=1, default=1)

    def validate(self):
        if not len(self.gammas):
            raise ValidationError('gammas', 'at least one geometric phase is required')
        if self.kind in USES_DELTAS and not len(self.deltas):
            raise ValidationError('deltas', 'at least one spin angle is required')
        if self.kind in COVERING_DELTAS:
            grid = np.sort(np.asarray(list(self.deltas)))
            if (len(grid) < 3 or grid[0] > 1e-9 or grid[-1] < math.pi - 1e-9
                    or np.max(np.diff(grid)) > math.pi / 8 + 1e-9):
                raise ValidationError(
                    'deltas', 'must cover [0, pi] in steps of at most pi/8')

    def chi_grid(self):
        return np.linspace(0.0, 2.0 * math.pi * self.chi_periods, self.chi_points,
                           endpoint=False)

    @classmethod
    def from_mapping(cls, kind, data):
        """Build a scenario from flat text values, filling kind defaults.

        Keys naming :class:`ExperimentConfig` fields go to ``config``; any
        other unknown key is rejected.
        """
        data = dict(data)
        if data.get('kind', kind) != kind:
            raise ValidationError('kind', 'file is for {0!r}, not {1!r}'.format(
                data['kind'], kind))
        config_names = ExperimentConfig.get_class_fields()
        config = {}
        for key in list(data):
            if key in config_names:
                config[key] = data.pop(key)
            elif key not in cls.get_class_fields():
                raise ValidationError(key, 'unknown key')
        data['kind'] = kind
        data['config'] = ExperimentConfig(config)
        data.setdefault('gammas', default_gammas(kind))
        if kind in USES_DELTAS:
            data.setdefault('deltas', default_delta_grid())
        return cls(data)

    def manifest(self):
        """The flat mapping written to the ``manifest`` file."""
        return self.to_serial()
