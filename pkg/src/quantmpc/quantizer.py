"""Mid-rise uniform quantizer with subtractive dither.

The quantizer maps x to cell midpoints x_min + eps/2 + k*eps and saturates
outside [x_min, x_max]. Dither quantization draws w uniform on
[-delta/2, delta/2], quantizes x + w and subtracts w again; with delta = eps
the reconstruction error is uniform white noise independent of the signal,
which is the property the identification analysis leans on.

Dither randomness is counter-based: every sample is a pure function of
(seed, counter), so sweeps can be parallelized or replayed in any order
without changing a single draw.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SEED_SALT = np.uint64(0x243F6A8885A308D3)
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def counter_uniforms(seed, start, count):
    """Uniform [0,1) samples for counters start..start+count-1 under `seed`.

    Pure function of (seed, counter): sample i is a 64-bit hash of the seed
    and the absolute counter value, so any contiguous block can be produced
    independently of how previous draws were batched.
    """
    with np.errstate(over="ignore"):
        key = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) ^ _SEED_SALT)
        idx = np.arange(start, start + count, dtype=np.uint64)
        bits = _mix64(key + (idx + np.uint64(1)) * _GAMMA)
    return (bits >> np.uint64(11)).astype(np.float64) * _INV_2_53


def stable_seed(*parts):
    """Collapse parts (master seed, b, trial, labels...) into one 64-bit seed.

    Parts may be integers or strings; strings are folded in bytewise, so
    the same labels map to the same stream family on every platform.
    """

    def fold(acc, value):
        acc = _mix64(acc ^ np.uint64(value & 0xFFFFFFFFFFFFFFFF))
        return acc * _GAMMA + np.uint64(1)

    acc = _SEED_SALT
    with np.errstate(over="ignore"):
        for p in parts:
            if isinstance(p, str):
                data = p.encode("utf-8")
                acc = fold(acc, len(data))
                for i in range(0, len(data), 8):
                    acc = fold(acc, int.from_bytes(data[i : i + 8], "little"))
            else:
                acc = fold(acc, int(p))
        return int(_mix64(acc))


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform quantizer over [x_min, x_max] with 2^b cells.

    eps defaults to (x_max - x_min)/2^b; pass eps explicitly only when the
    resolution is not tied to a word length (required_bits then reports the
    word length needed to cover the range at that resolution).
    """

    x_min: float
    x_max: float
    b: int
    eps: float = None
    delta: float = None

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"empty range [{self.x_min}, {self.x_max}]")
        if self.eps is None:
            object.__setattr__(self, "eps", (self.x_max - self.x_min) / 2 ** self.b)
        if self.eps <= 0:
            raise ValueError("resolution must be positive")
        if self.delta is None:
            object.__setattr__(self, "delta", self.eps)


def spec_from_samples(samples, b, percentile=99.9, margin=1.1):
    """Freeze a symmetric quantizer range from a dry (unquantized) pass.

    Range covers the given percentile of |samples| plus a relative margin;
    saturation beyond it is accepted as long as it stays rare.
    """
    r = float(np.percentile(np.abs(np.asarray(samples, dtype=float).ravel()), percentile)) * margin
    if r <= 0:
        raise ValueError("degenerate signal: dry pass has no excursion")
    return QuantizerSpec(-r, r, b)


@dataclass(frozen=True)
class DitherStream:
    """Counter-based dither source; same (seed, counter) => same draws."""

    seed: int
    counter: int = 0

    def uniforms(self, count):
        """Return `count` uniforms in [0,1) and the advanced stream."""
        u = counter_uniforms(self.seed, self.counter, count)
        return u, replace(self, counter=self.counter + count)


def quantize(spec, x):
    """Mid-rise quantizer with saturation, elementwise on arrays.

    Interior: x_min + eps/2 + eps*floor((x - x_min)/eps). Below range the
    lowest midpoint is returned; above range the top-cell value, which by
    construction sits eps/2 beyond x_max.
    """
    x = np.asarray(x, dtype=float)
    lo, eps = spec.x_min, spec.eps
    y = lo + eps / 2 + eps * np.floor((x - lo) / eps)
    top = lo + eps / 2 + eps * math.floor((spec.x_max - lo) / eps)
    y = np.where(x < lo, lo + eps / 2, y)
    y = np.where(x > spec.x_max, top, y)
    if y.ndim == 0:
        return float(y)
    return y


def dither_quantize(spec, x, w):
    """Subtractively dithered quantization of a scalar: x~ = Q(x + w) - w.

    Returns (x~, e) with e = x - x~. For in-range x + w, |e| <= eps/2.
    """
    if abs(w) > spec.delta / 2 + 1e-15:
        raise ValueError(f"dither {w} outside [-delta/2, delta/2]")
    xq = quantize(spec, x + w) - w
    return xq, x - xq


def dither_quantize_array(spec, x, seed, counter):
    """Vectorized dithered quantization of a flat array.

    Sample i uses the dither at absolute counter `counter + i`. Returns
    (x~, e, next_counter). Bit-identical to repeated scalar calls against a
    DitherStream with the same seed and starting counter.
    """
    x = np.asarray(x, dtype=float)
    u = counter_uniforms(seed, counter, x.size).reshape(x.shape)
    w = (u - 0.5) * spec.delta
    xq = quantize(spec, x + w) - w
    return xq, x - xq, counter + x.size


def dither_quantize_vector(specs, x, stream):
    """Dither-quantize one vector sample, one spec per coordinate.

    Advances the stream by dim(x) so consecutive samples never share dither.
    """
    x = np.asarray(x, dtype=float)
    if len(specs) != x.size:
        raise ValueError(f"{len(specs)} specs for {x.size} coordinates")
    u, stream = stream.uniforms(x.size)
    xq = np.empty_like(x)
    e = np.empty_like(x)
    for i, spec in enumerate(specs):
        w = (u[i] - 0.5) * spec.delta
        xq[i] = quantize(spec, x[i] + w) - w
        e[i] = x[i] - xq[i]
    return xq, e, stream


def required_bits(spec):
    """Word length needed to span the range at the spec's resolution."""
    ratio = (spec.x_max - spec.x_min) / spec.eps
    return max(0, math.ceil(math.log2(ratio) - 1e-12))
