"""Independent reference routines used to derive and check frozen expected values.

Nothing in here imports the package under test.
"""

from __future__ import annotations

import re

# Keccak-f[1600] round constants and rotation offsets (FIPS 202).
_RC = [
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
]
_ROT = [
    [0, 36, 3, 41, 18],
    [1, 44, 10, 45, 2],
    [62, 6, 43, 15, 61],
    [28, 55, 25, 21, 56],
    [27, 20, 39, 8, 14],
]
_MASK = (1 << 64) - 1


def _rol(x: int, n: int) -> int:
    return ((x << n) | (x >> (64 - n))) & _MASK if n else x


def _keccak_f(a: list[list[int]]) -> None:
    for rc in _RC:
        c = [a[x][0] ^ a[x][1] ^ a[x][2] ^ a[x][3] ^ a[x][4] for x in range(5)]
        d = [c[(x - 1) % 5] ^ _rol(c[(x + 1) % 5], 1) for x in range(5)]
        for x in range(5):
            for y in range(5):
                a[x][y] ^= d[x]
        b = [[0] * 5 for _ in range(5)]
        for x in range(5):
            for y in range(5):
                b[y][(2 * x + 3 * y) % 5] = _rol(a[x][y], _ROT[x][y])
        for x in range(5):
            for y in range(5):
                a[x][y] = b[x][y] ^ ((~b[(x + 1) % 5][y]) & b[(x + 2) % 5][y])
        a[0][0] ^= rc


def shake128_ref(data: bytes, nbytes: int) -> bytes:
    """Textbook sponge construction; rate 168 bytes, domain suffix 0x1F."""
    rate = 168
    padded = bytearray(data) + b"\x1f"
    while len(padded) % rate:
        padded.append(0)
    padded[-1] |= 0x80
    a = [[0] * 5 for _ in range(5)]
    for off in range(0, len(padded), rate):
        block = padded[off:off + rate]
        for i in range(rate // 8):
            lane = int.from_bytes(block[8 * i:8 * i + 8], "little")
            a[i % 5][i // 5] ^= lane
        _keccak_f(a)
    out = bytearray()
    while len(out) < nbytes:
        for i in range(rate // 8):
            out += a[i % 5][i // 5].to_bytes(8, "little")
        _keccak_f(a)
    return bytes(out[:nbytes])


def shake128_hex(text: str, bits: int) -> str:
    return shake128_ref(text.encode("utf-8"), bits // 8).hex()


def whitespace_runs_interior(message: str) -> int:
    """Count whitespace runs strictly inside the trimmed message, char by char."""
    trimmed = message.strip()
    runs, in_ws = 0, False
    for ch in trimmed:
        if ch.isspace():
            if not in_ws:
                runs += 1
            in_ws = True
        else:
            in_ws = False
    return runs


def prefix_assignment(patterns_by_count: list[tuple[str, int]], min_bits: int = 16) -> dict[str, str]:
    """Greedy frequency-ordered shortest-unique-prefix assignment, written longhand.

    Works over the full 256-bit digest string and slices it, rather than
    calling a hash at each length.
    """
    order = sorted(patterns_by_count, key=lambda pc: (-pc[1], pc[0]))
    full = {p: shake128_hex(p, 256) for p, _ in order}
    taken: set[str] = set()
    out: dict[str, str] = {}
    for pattern, _ in order:
        nchars = min_bits // 4
        while full[pattern][:nchars] in taken:
            nchars += 2
        taken.add(full[pattern][:nchars])
        out[pattern] = full[pattern][:nchars]
    return out


def glob_match(glob: str, term: str) -> bool:
    """Translate a leading/trailing-star glob into an anchored regex."""
    body = re.escape(glob.strip("*"))
    pattern = ("" if glob.startswith("*") else "^") + body + ("" if glob.endswith("*") else "$")
    return re.search(pattern, term, re.IGNORECASE) is not None
