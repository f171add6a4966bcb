"""Binary container for index state (layout documented in FORMAT.md).

A state is a nested dict whose leaves are ints, floats, strings, lists of
ints, lists of strings, or (nested) lists of int lists.  It is flattened to
dotted names and written as typed records after a small header; a SHA-256
digest of everything before it closes the file and is checked before any
record is decoded.
"""

from __future__ import annotations

import hashlib
import struct
import sys
from array import array

from .errors import CorruptIndex

MAGIC = b"GCIX"
VERSION = 1
_DIGEST = 32
_I64_MIN, _I64_MAX = -(1 << 63), (1 << 63) - 1


def flatten(state: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in state.items():
        name = prefix + str(k)
        if isinstance(v, dict):
            out.update(flatten(v, name + "."))
        else:
            out[name] = v
    return out


def unflatten(flat: dict) -> dict:
    root = {}
    for name, v in flat.items():
        parts = name.split(".")
        d = root
        for p in parts[:-1]:
            d = d.setdefault(p, {})
        d[parts[-1]] = v
    return root


# -- value encoding ---------------------------------------------------------

def _le_bytes(a: array) -> bytes:
    if sys.byteorder != "little":
        a = array(a.typecode, a)
        a.byteswap()
    return a.tobytes()


def _encode_ints(xs) -> bytes:
    xs = [int(x) for x in xs]
    if all(_I64_MIN <= x <= _I64_MAX for x in xs):
        return b"q" + _le_bytes(array("q", xs))
    width = max((x.bit_length() for x in xs), default=0) // 8 + 1
    body = b"".join(x.to_bytes(width, "little", signed=True) for x in xs)
    return b"b" + struct.pack("<I", width) + body


def _decode_ints(buf: bytes) -> list:
    tag, body = buf[:1], buf[1:]
    if tag == b"q":
        if len(body) % 8:
            raise CorruptIndex("int64 array has a ragged length")
        a = array("q")
        a.frombytes(body)
        if sys.byteorder != "little":
            a.byteswap()
        return a.tolist()
    if tag == b"b":
        (width,) = struct.unpack_from("<I", body)
        body = body[4:]
        if width == 0 or len(body) % width:
            raise CorruptIndex("big-int array has a ragged length")
        fb = int.from_bytes
        return [fb(body[k:k + width], "little", signed=True)
                for k in range(0, len(body), width)]
    raise CorruptIndex("unknown int array tag %r" % tag)


def _pack_blob(b: bytes) -> bytes:
    return struct.pack("<Q", len(b)) + b


def _unpack_blob(buf: bytes, pos: int):
    (k,) = struct.unpack_from("<Q", buf, pos)
    pos += 8
    if pos + k > len(buf):
        raise CorruptIndex("record runs past the end of the file")
    return buf[pos:pos + k], pos + k


def _kind(v) -> str:
    if isinstance(v, bool) or isinstance(v, int):
        return "i"
    if isinstance(v, float):
        return "f"
    if isinstance(v, str):
        return "s"
    if isinstance(v, (list, tuple)):
        for x in v:
            if isinstance(x, (list, tuple)):
                return "L"
            if isinstance(x, str):
                return "S"
            if x is not None:
                return "I"
        return "I"
    raise TypeError("cannot serialize %r" % type(v))


def encode_value(v) -> bytes:
    k = _kind(v)
    if k == "i":
        return b"i" + _encode_ints([v])
    if k == "f":
        return b"f" + struct.pack("<d", v)
    if k == "s":
        return b"s" + v.encode("utf-8")
    if k == "I":
        return b"I" + _encode_ints(v)
    if k == "S":
        return b"S" + b"".join(_pack_blob(x.encode("utf-8")) for x in v)
    # list of lists: lengths, then the concatenation as one value
    lengths = _encode_ints([len(x) for x in v])
    flat = [y for x in v for y in x]
    if flat and isinstance(flat[0], (list, tuple)):
        inner = encode_value(flat)
    else:
        inner = b"I" + _encode_ints(flat)
    return b"L" + _pack_blob(lengths) + inner


def decode_value(buf: bytes):
    k, body = buf[:1], buf[1:]
    if k == b"i":
        return _decode_ints(body)[0]
    if k == b"f":
        return struct.unpack("<d", body)[0]
    if k == b"s":
        return body.decode("utf-8")
    if k == b"I":
        return _decode_ints(body)
    if k == b"S":
        out, pos = [], 0
        while pos < len(body):
            s, pos = _unpack_blob(body, pos)
            out.append(s.decode("utf-8"))
        return out
    if k == b"L":
        lb, pos = _unpack_blob(body, 0)
        lengths = _decode_ints(lb)
        flat = decode_value(body[pos:])
        if sum(lengths) != len(flat):
            raise CorruptIndex("nested list lengths do not add up")
        out, p = [], 0
        for n in lengths:
            out.append(flat[p:p + n])
            p += n
        return out
    raise CorruptIndex("unknown record kind %r" % k)


# -- container ----------------------------------------------------------------

def dumps(engine: str, state: dict) -> bytes:
    flat = flatten(state)
    tag = engine.encode("ascii")
    parts = [MAGIC, struct.pack("<HB", VERSION, len(tag)), tag,
             struct.pack("<I", len(flat))]
    for name, v in flat.items():
        nb = name.encode("utf-8")
        parts.append(struct.pack("<H", len(nb)))
        parts.append(nb)
        parts.append(_pack_blob(encode_value(v)))
    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


def loads(data: bytes):
    """Return ``(engine, state)``; raise CorruptIndex on any damage."""
    if len(data) < len(MAGIC) + 3 + 4 + _DIGEST:
        raise CorruptIndex("file too short")
    body, digest = data[:-_DIGEST], data[-_DIGEST:]
    if hashlib.sha256(body).digest() != digest:
        raise CorruptIndex("checksum mismatch")
    if body[:4] != MAGIC:
        raise CorruptIndex("bad magic")
    try:
        version, tlen = struct.unpack_from("<HB", body, 4)
        if version != VERSION:
            raise CorruptIndex("unsupported format version %d" % version)
        pos = 7
        engine = body[pos:pos + tlen].decode("ascii")
        pos += tlen
        (count,) = struct.unpack_from("<I", body, pos)
        pos += 4
        flat = {}
        for _ in range(count):
            (nl,) = struct.unpack_from("<H", body, pos)
            pos += 2
            name = body[pos:pos + nl].decode("utf-8")
            pos += nl
            blob, pos = _unpack_blob(body, pos)
            flat[name] = decode_value(blob)
        if pos != len(body):
            raise CorruptIndex("trailing bytes after the last record")
    except (struct.error, UnicodeDecodeError, IndexError, ValueError) as e:
        raise CorruptIndex("malformed index: %s" % e) from None
    return engine, unflatten(flat)
