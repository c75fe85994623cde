"""Frame-level transforms and the portable tensor file format.

A frame is a numpy array of dtype uint8: ``(H, W)`` for grayscale or
``(H, W, 3)`` for interleaved RGB. The canonical lip crop is 300 pixels
wide by 200 high (width configurable where it matters). Transforms are
pure per-frame functions and safe to run concurrently across frames.

Tensor files use the LBTF layout: magic ``LBTF``, version u16=1, a u8
dtype code (0:u8, 1:f32, 2:f64), a u8 rank, rank u64 dimensions, then the
row-major payload; every integer is little-endian. Frames on disk are
binary PGM (P5) / PPM (P6), one file per frame, ordered lexicographically.
"""

import struct
from pathlib import Path

import numpy as np

from ._backend import kernels
from .errors import DataError, TensorFormatError

FRAME_WIDTH = 300
FRAME_HEIGHT = 200

LBTF_MAGIC = b"LBTF"
LBTF_VERSION = 1
_DTYPE_CODES = {np.dtype(np.uint8): 0, np.dtype(np.float32): 1, np.dtype(np.float64): 2}
_CODE_DTYPES = {0: np.dtype("u1"), 1: np.dtype("<f4"), 2: np.dtype("<f8")}

# BT.601 luma weights
_LUMA_R = 0.299
_LUMA_G = 0.587
_LUMA_B = 0.114

CANNY_SIGMA = 1.4
CANNY_KERNEL_SIZE = 5
CANNY_LOW = 0.1
CANNY_HIGH = 0.3


def _require_gray(frame, min_side=1):
    frame = np.asarray(frame)
    if frame.ndim != 2 or frame.dtype != np.uint8:
        raise DataError(
            f"expected a 2-D uint8 grayscale frame, got shape {frame.shape} dtype {frame.dtype}"
        )
    if frame.shape[0] < min_side or frame.shape[1] < min_side:
        raise DataError(
            f"image too small: {frame.shape[1]}x{frame.shape[0]}, need at least {min_side}x{min_side}"
        )
    return frame


def to_grayscale(frame):
    """Convert an RGB frame to grayscale with BT.601 luma weights."""
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[2] != 3 or frame.dtype != np.uint8:
        raise DataError(
            f"expected an (H, W, 3) uint8 RGB frame, got shape {frame.shape} dtype {frame.dtype}"
        )
    r = frame[:, :, 0].astype(np.float64)
    g = frame[:, :, 1].astype(np.float64)
    b = frame[:, :, 2].astype(np.float64)
    luma = np.floor(_LUMA_R * r + _LUMA_G * g + _LUMA_B * b + 0.5)
    return np.clip(luma, 0.0, 255.0).astype(np.uint8)


def sobel(frame):
    """Sobel gradient magnitude, rounded and clamped to [0, 255]."""
    frame = _require_gray(frame, min_side=3)
    return kernels.sobel_mag(frame)


def laplacian(frame):
    """4-neighbour Laplacian, absolute response clamped to [0, 255]."""
    frame = _require_gray(frame, min_side=3)
    return kernels.laplacian_abs(frame)


def gaussian_kernel(size=CANNY_KERNEL_SIZE, sigma=CANNY_SIGMA):
    """Normalized 2-D Gaussian kernel sampled on an odd-sized grid."""
    if size % 2 != 1 or size < 1:
        raise DataError(f"kernel size must be odd and positive, got {size}")
    half = size // 2
    ax = np.arange(-half, half + 1, dtype=np.float64)
    xx, yy = np.meshgrid(ax, ax)
    k = np.exp(-(xx * xx + yy * yy) / (2.0 * sigma * sigma))
    return k / k.sum()


def canny(frame, low=CANNY_LOW, high=CANNY_HIGH):
    """Canny edge detector; returns a binary {0, 255} edge map.

    `low` and `high` are fractions of the maximum gradient magnitude
    surviving non-maximum suppression. Pipeline: 5x5 Gaussian blur
    (sigma 1.4), Sobel gradients, non-maximum suppression along the
    quantized gradient direction, double-threshold hysteresis.
    """
    frame = _require_gray(frame)
    if not (0.0 <= low < high <= 1.0):
        raise DataError(f"thresholds must satisfy 0 <= low < high <= 1, got low={low} high={high}")
    kern = gaussian_kernel()
    blurred = kernels.conv2d_replicate(frame.astype(np.float64), kern)
    gx, gy = kernels.sobel_gradients(blurred)
    mag = np.sqrt(gx * gx + gy * gy)
    sup = kernels.nms(mag, gx, gy)
    m = sup.max()
    if m == 0.0:
        return np.zeros(frame.shape, np.uint8)
    return kernels.hysteresis(sup, low * m, high * m)


# ---------------------------------------------------------------------------
# LBTF tensor files


def write_tensor(tensor, path):
    """Write an array to an LBTF file; dtype must be u8, f32 or f64."""
    tensor = np.asarray(tensor)
    if tensor.ndim and not tensor.flags["C_CONTIGUOUS"]:
        # ascontiguousarray would promote rank-0 tensors to rank 1
        tensor = np.ascontiguousarray(tensor)
    code = _DTYPE_CODES.get(tensor.dtype)
    if code is None:
        raise TensorFormatError(
            f"unsupported dtype {tensor.dtype}; LBTF holds uint8, float32 or float64"
        )
    if tensor.ndim > 255:
        raise TensorFormatError("tensor rank exceeds 255")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(LBTF_MAGIC)
        fh.write(struct.pack("<HBB", LBTF_VERSION, code, tensor.ndim))
        for d in tensor.shape:
            fh.write(struct.pack("<Q", d))
        fh.write(tensor.astype(tensor.dtype.newbyteorder("<"), copy=False).tobytes())


def read_tensor(path):
    """Read an LBTF file back into a numpy array (bit-exact round trip)."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 8:
        raise TensorFormatError(f"{path}: truncated header")
    if raw[:4] != LBTF_MAGIC:
        raise TensorFormatError(f"{path}: bad magic {raw[:4]!r}")
    version, code, rank = struct.unpack_from("<HBB", raw, 4)
    if version != LBTF_VERSION:
        raise TensorFormatError(f"{path}: unsupported version {version}")
    if code not in _CODE_DTYPES:
        raise TensorFormatError(f"{path}: unknown dtype code {code}")
    header_end = 8 + 8 * rank
    if len(raw) < header_end:
        raise TensorFormatError(f"{path}: truncated dimension list")
    dims = struct.unpack_from(f"<{rank}Q", raw, 8) if rank else ()
    count = 1
    for d in dims:
        count *= d
    dtype = _CODE_DTYPES[code]
    if count * dtype.itemsize >= 2**63:
        raise TensorFormatError(f"{path}: dimension overflow in {dims}")
    expected = count * dtype.itemsize
    payload = raw[header_end:]
    if len(payload) < expected:
        raise TensorFormatError(
            f"{path}: truncated buffer, expected {expected} bytes, found {len(payload)}"
        )
    if len(payload) > expected:
        raise TensorFormatError(f"{path}: {len(payload) - expected} trailing bytes")
    arr = np.frombuffer(payload, dtype=dtype, count=count).reshape(dims)
    return arr.astype(dtype.newbyteorder("="), copy=True)


# ---------------------------------------------------------------------------
# PGM / PPM frame files


def read_pnm(path):
    """Read a binary PGM (P5) or PPM (P6) frame with maxval <= 255."""
    path = Path(path)
    raw = path.read_bytes()
    pos = 0

    def token():
        nonlocal pos
        while pos < len(raw):
            c = raw[pos : pos + 1]
            if c == b"#":
                while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise TensorFormatError(f"{path}: truncated header")
        return raw[start:pos]

    magic = token()
    if magic not in (b"P5", b"P6"):
        raise TensorFormatError(f"{path}: not a binary PGM/PPM file (magic {magic!r})")
    width = int(token())
    height = int(token())
    maxval = int(token())
    if maxval <= 0 or maxval > 255:
        raise TensorFormatError(f"{path}: unsupported maxval {maxval}")
    pos += 1  # single whitespace byte before the raster
    channels = 1 if magic == b"P5" else 3
    expected = width * height * channels
    payload = raw[pos : pos + expected]
    if len(payload) < expected:
        raise TensorFormatError(f"{path}: truncated raster")
    arr = np.frombuffer(payload, dtype=np.uint8, count=expected)
    if channels == 1:
        return arr.reshape(height, width).copy()
    return arr.reshape(height, width, 3).copy()


def write_pnm(frame, path):
    """Write a uint8 frame as binary PGM (2-D) or PPM ((H, W, 3))."""
    frame = np.asarray(frame)
    if frame.dtype != np.uint8 or frame.ndim not in (2, 3):
        raise DataError(f"expected a uint8 frame, got shape {frame.shape} dtype {frame.dtype}")
    if frame.ndim == 3 and frame.shape[2] != 3:
        raise DataError(f"RGB frame must have 3 channels, got {frame.shape[2]}")
    magic = b"P5" if frame.ndim == 2 else b"P6"
    h, w = frame.shape[:2]
    with open(path, "wb") as fh:
        fh.write(magic + b"\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(frame).tobytes())


def list_frame_files(frames_dir):
    """PGM/PPM files of a directory in lexicographic order."""
    frames_dir = Path(frames_dir)
    if not frames_dir.is_dir():
        raise DataError(f"not a directory: {frames_dir}")
    files = sorted(p for p in frames_dir.iterdir() if p.suffix.lower() in (".pgm", ".ppm"))
    if not files:
        raise DataError(f"no .pgm/.ppm frames found in {frames_dir}")
    return files
