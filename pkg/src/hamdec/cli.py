"""Command-line entry point: ``hamdec {encode,corrupt,decode,bench,pipeline}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import bench, fileformat, pipeline
from .codec import CodecError
from .engine import DecodeError, EngineConfig, encode_packet, decode_packet
from .packetizer import make_layout

EXIT_OK = 0
EXIT_DECODE = 2
EXIT_USAGE = 3
EXIT_IO = 4

log = logging.getLogger("hamdec")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def cmd_encode(args) -> int:
    data = Path(args.infile).read_bytes()
    bits = fileformat.bytes_to_bits(data)
    try:
        layout = make_layout(len(bits), args.tolerance)
    except CodecError as exc:
        raise UsageError(str(exc))
    fileformat.write_encoded(args.outfile, encode_packet(bits, layout), layout)
    return EXIT_OK


def cmd_corrupt(args) -> int:
    encoded, layout = fileformat.read_encoded(args.infile)
    ch = bench.ChannelModel(args.flips, args.seed, stress=args.flips > 1)
    corrupted, flips = bench.inject_errors(encoded, layout, ch)
    fileformat.write_encoded(args.outfile, corrupted, layout)
    print(" ".join(str(p) for p in flips))
    return EXIT_OK


def cmd_decode(args) -> int:
    encoded, layout = fileformat.read_encoded(args.infile)
    if args.message_bytes is not None and args.message_bytes * 8 != layout.message_bits:
        raise UsageError(
            f"--message-bytes {args.message_bytes} disagrees with file header "
            f"({layout.message_bits} bits)"
        )
    if args.tolerance is not None and args.tolerance != layout.t:
        raise UsageError(f"--tolerance {args.tolerance} disagrees with file header (t={layout.t})")
    cfg = EngineConfig(args.backend, args.workers)
    message = decode_packet(encoded, layout, cfg)
    Path(args.outfile).write_bytes(fileformat.bits_to_bytes(message))
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = EngineConfig("pooled", args.workers)
    records = bench.run_grid(args.sizes, args.tolerances, cfg, args.trials, args.seed)
    cells = bench.aggregate(records)
    csv_path = Path(args.csv)
    agg_path = Path(args.agg_csv) if args.agg_csv else csv_path.with_name(csv_path.stem + "_agg.csv")
    bench.emit_csv(records, csv_path)
    bench.emit_aggregate_csv(cells, agg_path)

    print(f"{'bytes':>6} {'t':>3} {'seq_ms':>10} {'pooled_ms':>10} {'speedup':>8} {'adt_ms/pkt':>11}")
    for c in cells:
        times = pipeline.StageTimes(args.tps, c.pooled_median_ms, args.tpr)
        run = pipeline.PipelineRun(args.trials, times)
        per_packet = pipeline.adt_makespan(run) / args.trials
        print(
            f"{c.packet_bytes:>6} {c.tolerance:>3} {c.seq_median_ms:>10.4f} "
            f"{c.pooled_median_ms:>10.4f} {c.speedup:>8.3f} {per_packet:>11.4f}"
        )
    print(f"wrote {csv_path} and {agg_path}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    times = pipeline.StageTimes(args.tps, args.tdke, args.tpr)
    run = pipeline.PipelineRun(args.n, times)
    sdt = pipeline.sdt_makespan(run)
    adt = pipeline.adt_makespan(run)
    print(f"sdt_makespan {sdt:.6g}")
    print(f"adt_makespan {adt:.6g}")
    print(f"savings {pipeline.savings(run):.6g}")
    try:
        print(f"speedup {pipeline.adt_speedup(run):.6g}")
    except ZeroDivisionError:
        print("speedup undefined")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hamdec", description="Segmented Hamming encode/decode and benchmarks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("encode", help="encode a raw file into the packed packet format")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", dest="outfile", required=True)
    s.add_argument("--tolerance", type=_positive, required=True)
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("corrupt", help="flip seeded random bits in each segment of an encoded file")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", dest="outfile", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--flips", type=int, default=1, help="flips per segment (>1 is stress mode)")
    s.set_defaults(func=cmd_corrupt)

    s = sub.add_parser("decode", help="decode a packed packet back to raw bytes")
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", dest="outfile", required=True)
    s.add_argument("--message-bytes", type=int)
    s.add_argument("--tolerance", type=_positive)
    s.add_argument("--backend", choices=["sequential", "pooled"], default="sequential")
    s.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("bench", help="time sequential vs pooled decode over a size x tolerance grid")
    s.add_argument("--sizes", type=_int_list, default=[400, 800, 1200, 1600, 2000])
    s.add_argument("--tolerances", type=_int_list, default=[2, 3, 4, 5, 6])
    s.add_argument("--trials", type=_positive, default=30)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    s.add_argument("--csv", default="bench.csv")
    s.add_argument("--agg-csv", help="aggregate output (default: <csv stem>_agg.csv)")
    s.add_argument("--tps", type=float, default=0.0, help="modelled send time per packet, ms")
    s.add_argument("--tpr", type=float, default=0.0, help="modelled receive time per packet, ms")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("pipeline", help="evaluate the SDT/ADT makespan model")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--tps", type=float, required=True)
    s.add_argument("--tdke", type=float, required=True)
    s.add_argument("--tpr", type=float, required=True)
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (DecodeError, bench.VerificationError) as exc:
        print(f"hamdec: {exc}", file=sys.stderr)
        return EXIT_DECODE
    except (UsageError, ValueError) as exc:
        if isinstance(exc, fileformat.FormatError):
            print(f"hamdec: {args.infile}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"hamdec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hamdec: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
