"""Command line entry point ``micg``.

    micg <synth|sweep|bandwidth|capacity|ber> --scenario FILE --out DIR
         [--seed N] [--points N] [--d-variant composed|paper] [--lossy]

Every output file ``X`` is accompanied by ``X.meta.json`` holding the
scenario digest, tool version, seed and options.  Outputs carry no
timestamps, so identical inputs give byte-identical files.
"""
import argparse
import csv
import io
import json
import math
import os
from pathlib import Path
import sys
import tempfile

import numpy as np

from . import __version__, link, multiuser
from .errors import InputError, MicgError, NumericError
from .scenario import build_link, load_scenario, receive_network, scenario_digest, transmit_network

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

SUBCOMMANDS = ("synth", "sweep", "bandwidth", "capacity", "ber")


def _write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _network_dict(net):
    return {
        "coil_resistance_ohm": net.coil_resistance,
        "series_inductance_h": net.series_inductance,
        "series_capacitance_f": net.series_capacitance,
        "branches": [
            {"inductance_h": li, "capacitance_f": ci, "pole_hz": f}
            for (li, ci), f in zip(net.branches, net.poles_hz)
        ],
        "resonances_hz": list(net.resonances_hz),
    }


def run_synth(scn, opts):
    body = {
        "tx": _network_dict(transmit_network(scn)),
        "rx": _network_dict(receive_network(scn)),
        "receiver_mode": scn.receiver_mode,
    }
    return {"synth.json": _json(body)}


def run_sweep(scn, opts):
    lk = build_link(scn, lossy=opts.lossy, d_variant=opts.d_variant)
    sw = scn.sweep
    res = link.sweep(lk, sw.f_lo_hz, sw.f_hi_hz, opts.points or sw.points, sw.spacing)
    rows = zip(res.frequencies, res.loss_db)
    extra = {"skipped_hz": [float(f) for f in res.skipped]}
    return {"sweep.csv": (_csv(["frequency_hz", "loss_db"], rows), extra)}


def run_bandwidth(scn, opts):
    lk = build_link(scn, lossy=opts.lossy, d_variant=opts.d_variant)
    sw = scn.sweep
    res = link.sweep(lk, sw.f_lo_hz, sw.f_hi_hz, opts.points or sw.points, sw.spacing)
    rows = []
    for fc in lk.rx_network.resonances_hz:
        band = link.three_db_band(res, fc)
        cap = link.capacity(lk, fc, scn.power.tx_power_w, scn.power.noise_psd_w_per_hz, band=band)
        rows.append([fc, band.f_min, band.min_db, band.lower, band.upper, band.width, cap])
    header = ["resonance_hz", "f_min_hz", "min_loss_db", "lower_hz", "upper_hz",
              "bandwidth_hz", "capacity_bps"]
    return {"bandwidth.csv": _csv(header, rows)}


def capacity_table(scn, lossy=False, d_variant="composed"):
    """Capacity vs SNR rows for every named position and receiver mode.

    The SNR axis is the transmit SNR ``P / (N0 B_ref)``; the receiver sees it
    scaled by the path loss and by ``B_ref / B`` of its own band.
    """
    fc = scn.single_resonance_hz
    n0 = scn.power.noise_psd_w_per_hz
    snr_db = np.asarray(scn.capacity.snr_db, dtype=float)
    powers = n0 * scn.capacity.reference_bandwidth_hz * 10 ** (snr_db / 10)
    rows = []
    for position in sorted(scn.geometry.positions):
        for mode in ("multi", "single"):
            lk = build_link(scn, position, mode, lossy=lossy, d_variant=d_variant)
            band = link.three_db_band(link.local_sweep(lk, fc), fc)
            caps = link.band_capacity(
                lambda f: link.path_loss(lk, 2 * math.pi * f), band.lower, band.upper, powers, n0
            )
            rows.extend([position, mode, s, c] for s, c in zip(snr_db, np.atleast_1d(caps)))
    return rows


def run_capacity(scn, opts):
    rows = capacity_table(scn, opts.lossy, opts.d_variant)
    return {"capacity.csv": _csv(["position", "receiver_mode", "snr_db", "capacity_bps"], rows)}


def run_ber(scn, opts):
    cfg = scn.ber
    seed = cfg.seed if opts.seed is None else opts.seed
    curves = {}
    rows = []
    for scheme in ("multi_frequency", "single_resonant"):
        mc = []
        for s in cfg.snr_db:
            analytic = multiuser.ber_bpsk(multiuser.effective_snr(
                scheme, cfg.n_users, float(multiuser.db_to_linear(s))))
            est = multiuser.monte_carlo_ber(scheme, cfg.n_users, s, cfg.n_symbols, seed)
            mc.append(est.ber)
            rows.append([scheme, s, analytic, est.ber, est.ci95, est.n_symbols])
        curves[scheme] = mc
    ber_csv = _csv(["scheme", "snr_db", "ber_analytic", "ber_monte_carlo", "ci95", "n_symbols"],
                   rows)

    req = []
    for t in cfg.targets:
        multi = multiuser.required_snr("multi_frequency", cfg.n_users, t)
        single = multiuser.required_snr("single_resonant", cfg.n_users, t)
        try:
            mc_gap = (multiuser.snr_at_ber(cfg.snr_db, curves["single_resonant"], t)
                      - multiuser.snr_at_ber(cfg.snr_db, curves["multi_frequency"], t))
        except InputError:
            mc_gap = float("nan")
        req.append([t, multi, single, single - multi, mc_gap])
    req_csv = _csv(["ber_target", "multi_frequency_db", "single_resonant_db", "gap_db",
                    "gap_monte_carlo_db"], req)
    return {"ber.csv": ber_csv, "required_snr.csv": req_csv}


RUNNERS = {
    "synth": run_synth,
    "sweep": run_sweep,
    "bandwidth": run_bandwidth,
    "capacity": run_capacity,
    "ber": run_ber,
}


def build_parser():
    p = argparse.ArgumentParser(prog="micg", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--scenario", required=True,
                   help="scenario JSON file or bundled name (paper_position1, paper_position2)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the BER seed")
    p.add_argument("--points", type=int, default=None, help="override sweep grid points")
    p.add_argument("--d-variant", choices=("composed", "paper"), default="composed")
    p.add_argument("--lossy", action="store_true", help="use the conductive soil wavenumber")
    return p


def run(subcommand, scenario, out_dir, opts):
    """Run one subcommand and write its outputs; returns the written paths."""
    outputs = RUNNERS[subcommand](scenario, opts)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "tool": "micg",
        "version": __version__,
        "subcommand": subcommand,
        "scenario": scenario.name,
        "scenario_digest": scenario_digest(scenario),
        "seed": scenario.ber.seed if opts.seed is None else opts.seed,
        "options": {
            "d_variant": opts.d_variant,
            "lossy": opts.lossy,
            "points": opts.points,
        },
    }
    written = []
    for name, body in outputs.items():
        # runners may attach output-specific metadata
        text, extra = body if isinstance(body, tuple) else (body, {})
        _write_atomic(out / name, text)
        _write_atomic(out / f"{name}.meta.json", _json({**meta, **extra, "output": name}))
        written.append(out / name)
    return written


def main(argv=None):
    opts = build_parser().parse_args(argv)
    if opts.points is not None and opts.points < 2:
        print("micg: error: --points must be at least 2", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        scn = load_scenario(opts.scenario)
        run(opts.subcommand, scn, opts.out, opts)
    except InputError as exc:
        print(f"micg: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"micg: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"micg: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MicgError as exc:
        print(f"micg: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
