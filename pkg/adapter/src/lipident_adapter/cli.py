"""Command line: one video in, one landmark JSON out.

    lipident-adapter --video clip.avi --output clip.json [--detector contour]
                     [--index-map map.json] [--clip-id id]

Exit codes: 0 success, 1 usage error, 2 extraction/data error. Batch work
is per-process: run one adapter per video.
"""

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .adapter import AdapterConfig, extract_landmarks
from .detectors import DETECTORS
from .errors import AdapterError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="lipident-adapter", description=__doc__)
    parser.add_argument("--version", action="version", version=f"lipident-adapter {__version__}")
    parser.add_argument("--video", required=True, help="input video file")
    parser.add_argument("--output", required=True, help="landmark JSON to write")
    parser.add_argument("--detector", choices=sorted(DETECTORS), default="contour")
    parser.add_argument("--index-map", help="JSON file with 8 detector point indices")
    parser.add_argument("--clip-id", help="clip id to embed (default: video file stem)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    index_map = None
    if args.index_map:
        try:
            index_map = tuple(json.loads(Path(args.index_map).read_text("utf-8")))
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            print(f"error: cannot read index map {args.index_map}: {exc}", file=sys.stderr)
            return 1
    try:
        config = AdapterConfig(
            video_path=args.video,
            output_path=args.output,
            detector=args.detector,
            landmark_index_map=index_map,
            clip_id=args.clip_id,
        )
        payload = extract_landmarks(config)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    held = len(payload["held"])
    print(
        f"landmarks written to {args.output}: {len(payload['frames'])} frames"
        + (f", {held} held" if held else "")
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
