"""``spinpath`` command line.

Every subcommand builds a :class:`~spinpath.scenario.Scenario` from
``--config``, ``--set`` and ``--seed``, writes its ``manifest`` and then its
CSV outputs into ``--out``. ``spinpath run --config <manifest>`` repeats a
previous run.

Exit status is 0 on success, 2 for invalid input and 1 for any other
failure.
"""
import argparse
import logging
import math
import os
import sys

from . import __version__, schema
from .analysis import (fit_sinusoid, measure_polar_surface, run_azimuthal_scan,
                       run_polar_scan)
from .chsh import (analytic_record, azimuthal_optimal_setting, grid_maximize_s,
                   polar_optimal_angles, s_azimuthal, s_no_adjustment, s_polar,
                   s_polar_max)
from .errors import SpinpathError, ValidationError
from .experiment import (BEAM_BLOCK, INTERFEROGRAM, QUADRUPLE, estimate_s,
                         simulate_beam_block, simulate_interferogram, stream)
from .geometric import FlipperSetting, transit_time
from .scenario import Scenario
from .tables import (write_beam_block, write_interferogram, write_scan_results,
                     write_table)


log = logging.getLogger(__name__)

MANIFEST = 'manifest'

COMMANDS = {
    'analytic': 'analytic',
    'surface': 'surface',
    'simulate': 'simulate-interferogram',
    'beam-block': 'beam-block',
    'scan-polar': 'polar-scan',
    'scan-azimuthal': 'azimuthal-scan',
    'bell-test': 'bell-test',
}

COIL_LENGTH = 0.02
WAVELENGTH = 1.91e-10
FLIPPERS = (('inner', 58e3), ('compensator', 29e3))


def _run_analytic(scenario, out):
    rows = []
    for gamma in scenario.gammas:
        beta1, beta1_p, _ = polar_optimal_angles(gamma)
        alpha2_p, beta2 = azimuthal_optimal_setting(gamma)
        rows.append((gamma, s_no_adjustment(gamma), s_polar_max(gamma),
                     float(s_azimuthal(alpha2_p, beta2, beta2, gamma)),
                     beta1, beta1_p, alpha2_p))
    paths = [write_table(os.path.join(out, 'analytic.csv'),
                         ('gamma_rad', 's_no_adjust', 's_polar_max', 's_azimuthal_max',
                          'beta1_rad', 'beta1p_rad', 'alpha2p_rad'), rows)]

    tau = transit_time(COIL_LENGTH, WAVELENGTH)
    resonance = []
    for name, frequency in FLIPPERS:
        flipper = FlipperSetting(frequency=2.0 * math.pi * frequency, exposure_time=tau)
        b0, b_rf = flipper.resonance()
        resonance.append((name, frequency, tau, b0, b_rf))
    paths.append(write_table(os.path.join(out, 'resonance.csv'),
                             ('flipper', 'frequency_hz', 'tau_s', 'b0_t', 'brf_t'),
                             resonance))
    return paths


def _run_surface(scenario, out):
    """Analytic and simulated S(β₁, β₁′) tables on the δ grid, per γ."""
    deltas = list(scenario.deltas)
    config = scenario.config
    paths, maxima = [], []
    for index, gamma in enumerate(scenario.gammas):
        surface = measure_polar_surface(config, gamma, deltas, scenario.chi_grid(), index)
        measured = surface.tabulate(deltas)
        rows = []
        for i, beta1 in enumerate(deltas):
            for j, beta1_p in enumerate(deltas):
                rows.append((beta1, beta1_p,
                             float(s_polar(math.pi / 2, beta1, beta1_p, gamma)),
                             float(measured[i, j])))
        paths.append(write_table(
            os.path.join(out, 'surface_{0:02d}.csv'.format(index)),
            ('beta1_rad', 'beta1p_rad', 's_analytic', 's_measured'), rows))
        beta1, beta1_p, s = grid_maximize_s(gamma)
        maxima.append((gamma, beta1, beta1_p, s, surface.result().s))
    paths.append(write_table(os.path.join(out, 'surface_max.csv'),
                             ('gamma_rad', 'beta1_rad', 'beta1p_rad', 's_analytic',
                              's_measured'), maxima))
    return paths


def _run_simulate(scenario, out):
    config = scenario.config
    paths, fits = [], []
    for i, gamma in enumerate(scenario.gammas):
        for j, delta in enumerate(scenario.deltas):
            gram = simulate_interferogram(config, delta, gamma, scenario.chi_grid(),
                                          stream(config.seed, INTERFEROGRAM, i, j))
            paths.append(write_interferogram(
                gram, os.path.join(out, 'interferogram_g{0:02d}_d{1:02d}.csv'.format(i, j))))
            fit = fit_sinusoid(gram)
            fits.append((gamma, delta, fit.mean, fit.amplitude, fit.phase,
                         fit.visibility, fit.visibility_error()))
    paths.append(write_table(os.path.join(out, 'fits.csv'),
                             ('gamma_rad', 'delta_rad', 'mean', 'amplitude', 'phase_rad',
                              'visibility', 'visibility_err'), fits))
    return paths


def _run_beam_block(scenario, out):
    config = scenario.config
    paths = []
    for i, gamma in enumerate(scenario.gammas):
        for number, blocked in enumerate(('II', 'I')):
            scan = simulate_beam_block(config, list(scenario.deltas), gamma, blocked,
                                       stream(config.seed, BEAM_BLOCK, i, number))
            paths.append(write_beam_block(
                scan, os.path.join(out, 'beam_block_g{0:02d}_{1}.csv'.format(i, blocked))))
    return paths


def _run_polar_scan(scenario, out):
    results = run_polar_scan(scenario.config, list(scenario.gammas), list(scenario.deltas),
                             scenario.chi_grid(), scenario.workers)
    return [write_scan_results(results, os.path.join(out, 'scan_polar.csv'))]


def _run_azimuthal_scan(scenario, out):
    results = run_azimuthal_scan(scenario.config, list(scenario.gammas),
                                 scenario.chi_grid(), scenario.workers)
    return [write_scan_results(results, os.path.join(out, 'scan_azimuthal.csv'))]


def _run_bell_test(scenario, out):
    config = scenario.config
    rows = []
    for i, gamma in enumerate(scenario.gammas):
        expected = analytic_record(gamma, scenario.scheme)
        record, sigma = estimate_s(config, expected.angles, gamma,
                                   stream(config.seed, QUADRUPLE, i))
        rows.append((gamma, scenario.scheme, record.s, sigma, expected.s))
    return [write_table(os.path.join(out, 'bell_test.csv'),
                        ('gamma_rad', 'scheme', 's', 'sigma_s', 's_expected'), rows)]


RUNNERS = {
    'analytic': _run_analytic,
    'surface': _run_surface,
    'simulate-interferogram': _run_simulate,
    'beam-block': _run_beam_block,
    'polar-scan': _run_polar_scan,
    'azimuthal-scan': _run_azimuthal_scan,
    'bell-test': _run_bell_test,
}


def run(scenario, output_dir):
    """Write the manifest and every output of ``scenario`` into ``output_dir``.

    Returns the list of files written, manifest first.
    """
    if not os.path.isdir(output_dir):
        os.makedirs(output_dir)
    manifest = os.path.join(output_dir, MANIFEST)
    schema.dump(scenario.manifest(), manifest)
    paths = [manifest] + RUNNERS[scenario.kind](scenario, output_dir)
    log.info('%s: wrote %d files to %s', scenario.kind, len(paths), output_dir)
    return paths


def load_scenario(kind, config_path=None, settings=(), seed=None):
    """Merge the config file, ``--set`` overrides and ``--seed`` into a Scenario.

    ``kind`` None takes the kind from the file.
    """
    data = schema.load(config_path) if config_path else {}
    for setting in settings:
        if '=' not in setting:
            raise ValidationError(None, '--set expects key=value, got {0!r}'.format(setting))
        data.update(schema.loads(setting))
    if seed is not None:
        data['seed'] = seed
    if kind is None:
        if 'kind' not in data:
            raise ValidationError('kind', 'the config file names no kind')
        kind = data['kind']
    return Scenario.from_mapping(kind, data)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='master random seed (default: from config, else 0)')
    common.add_argument('--out', default='.', help='output directory')
    common.add_argument('--config', help='key = value configuration file')
    common.add_argument('--set', dest='settings', action='append', default=[],
                        metavar='KEY=VALUE', help='override one configuration entry')
    common.add_argument('--workers', type=int, default=None,
                        help='threads for per-phase scans')
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    common.add_argument('-q', '--quiet', action='store_true', help='warnings only')

    parser = argparse.ArgumentParser(
        prog='spinpath',
        description='Spin-path entangled neutron CHSH tests with a geometric phase.')
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    for name in COMMANDS:
        commands.add_parser(name, parents=[common],
                            help='{0} scenario'.format(COMMANDS[name]))
    commands.add_parser('run', parents=[common], help='repeat a run from its manifest')
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    settings = list(args.settings)
    if args.workers is not None:
        settings.append('workers={0}'.format(args.workers))
    try:
        scenario = load_scenario(COMMANDS.get(args.command), args.config, settings,
                                 args.seed)
        run(scenario, args.out)
    except ValidationError as exc:
        sys.stderr.write('spinpath: invalid input: {0}\n'.format(exc))
        return 2
    except (SpinpathError, OSError) as exc:
        sys.stderr.write('spinpath: {0}\n'.format(exc))
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
