#!/usr/bin/env python3
"""Writes the bundled grammars, example tasks and desk suites.

Run from the repository root: python3 data/generate.py
"""
import json
import os

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def dump(path, doc):
    path = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def lit(ret, value, prob=None):
    r = {"op": str(value), "ret": ret, "kind": "literal", "value": value}
    if prob is not None:
        r["prob"] = prob
    return r


def op(name, ret, args, prob=None):
    r = {"op": name, "ret": ret, "args": args, "kind": "op"}
    if prob is not None:
        r["prob"] = prob
    return r


def arg(ret, name):
    return {"op": name, "ret": ret, "kind": "input", "value": name}


# Numeric-string concatenation grammars. The 1000-literal one carries the
# published probabilities; the 100-literal one scales them down.
def concat_grammar(n, p_concat, p_last, p_other, last_first=False):
    last = lit("S", str(n), p_last)
    others = [lit("S", str(i), p_other) for i in range(1, n)]
    rules = [op("concat", "S", ["S", "S"], p_concat)]
    rules += [last] + others if last_first else others + [last]
    return {"types": ["S"], "initial": "S", "rules": rules}


dump("data/grammars/concat_1000.json", concat_grammar(1000, 0.00005, 0.00110895, 0.00099984))
dump("data/tasks/concat_1000.json",
     {"name": "concat_1000", "domain": "strings", "arguments": [], "examples": [{"inputs": {}, "output": "100010001000"}]})

p_other = (1 - 0.0005 - 0.0109) / 99
dump("data/grammars/concat_100.json", concat_grammar(100, 0.0005, 0.0109, p_other, last_first=True))
dump("data/tasks/concat_100.json",
     {"name": "concat_100", "domain": "strings", "arguments": [], "examples": [{"inputs": {}, "output": "100100100"}]})

# I -> 1 | 2 | I + I
dump("data/grammars/one_two_add.json", {
    "types": ["I"], "initial": "I",
    "rules": [lit("I", 1, 0.4), lit("I", 2, 0.35), op("add", "I", ["I", "I"], 0.25)],
})
dump("data/tasks/one_two_add.json",
     {"name": "one_two_add", "domain": "strings", "arguments": [], "examples": [{"inputs": {}, "output": 1000}]})

# ---- string DSL ---------------------------------------------------------------


def string_dsl(literals, ints):
    rules = [
        op("replace", "S", ["S", "S", "S"]), op("concat", "S", ["S", "S"]), op("substr", "S", ["S", "I", "I"]),
        op("ite", "S", ["B", "S", "S"]), op("intToStr", "S", ["I"]), op("charAt", "S", ["S", "I"]),
        op("toLower", "S", ["S"]), op("toUpper", "S", ["S"]), arg("S", "arg0"), arg("S", "arg1"),
    ]
    rules += [lit("S", s) for s in literals]
    rules += [
        op("strToInt", "I", ["S"]), op("add", "I", ["I", "I"]), op("sub", "I", ["I", "I"]), op("mul", "I", ["I", "I"]),
        op("mod", "I", ["I", "I"]), op("length", "I", ["S"]), op("indexOf", "I", ["S", "S", "I"]),
        op("ite", "I", ["B", "I", "I"]), op("find", "I", ["S", "S"]),
    ]
    rules += [lit("I", i) for i in ints]
    rules += [
        lit("B", True), lit("B", False), op("isEqual", "B", ["I", "I"]), op("isLess", "B", ["I", "I"]),
        op("isGreater", "B", ["I", "I"]), op("contains", "B", ["S", "S"]), op("isSuffixOf", "B", ["S", "S"]),
        op("isPrefixOf", "B", ["S", "S"]),
    ]
    return {"types": ["S", "I", "B"], "initial": "S", "rules": rules}


dump("data/grammars/strings.json", string_dsl([" ", ".", "-"], [0, 1]))
dump("suites/strings/grammar.json", string_dsl([" ", ".", "-"], [0, 1]))


def stask(name, args, pairs):
    exs = []
    for ins, out in pairs:
        exs.append({"inputs": dict(zip(args, ins)), "output": out})
    return {"name": name, "domain": "strings", "arguments": args, "examples": exs}


NAMES = [("alice", "smith"), ("Bob", "Jones"), ("carol ann", "Lee"), ("DAVE", "o-brien")]
WORDS = ["hello", "World", "a-b-c", "synth esis", "Mixed Case"]


def one(f):
    return [((w,), f(w)) for w in WORDS]


def two(f):
    return [((a, b), f(a, b)) for a, b in NAMES]


string_tasks = [
    stask("upper", ["arg0"], one(str.upper)),
    stask("lower", ["arg0"], one(str.lower)),
    stask("join", ["arg0", "arg1"], two(lambda a, b: a + b)),
    stask("join_reversed", ["arg0", "arg1"], two(lambda a, b: b + a)),
    stask("double", ["arg0"], one(lambda w: w + w)),
    stask("first_char", ["arg0"], one(lambda w: w[0])),
    stask("second_char", ["arg0"], one(lambda w: w[1])),
    stask("dash_to_dot", ["arg0"], one(lambda w: w.replace("-", ".", 1))),
    stask("space_to_dash", ["arg0"], one(lambda w: w.replace(" ", "-", 1))),
    stask("add_period", ["arg0"], one(lambda w: w + ".")),
    stask("dot_to_dash", ["arg0"], [((w,), w.replace(".", "-", 1)) for w in ["a.b", "x.y.z", "none", "1.5", "end."]]),
    stask("space_to_dot", ["arg0"], one(lambda w: w.replace(" ", ".", 1))),
    stask("append_dash", ["arg0"], one(lambda w: w + "-")),
    stask("prefix_space", ["arg0"], one(lambda w: " " + w)),
    stask("second_initial", ["arg0", "arg1"], two(lambda a, b: b[0])),
    stask("second_with_period", ["arg0", "arg1"], two(lambda a, b: b + ".")),
    stask("dash_position", ["arg0"], one(lambda w: str(w.find("-")) if w.find("-") >= 0 else "")),
]
for t in string_tasks:
    dump("suites/strings/%s.json" % t["name"], t)

# ---- bit-vector DSL -------------------------------------------------------------

M = (1 << 64) - 1


def bv_dsl(literals):
    rules = [op(n, "BV", ["BV", "BV"]) for n in ("xor", "and", "or")]
    rules += [op("neg", "BV", ["BV"]), op("not", "BV", ["BV"])]
    rules += [op(n, "BV", ["BV", "BV"]) for n in ("add", "mul", "udiv", "urem", "lshr", "ashr", "shl", "sdiv", "srem", "sub")]
    rules += [op("ite", "BV", ["B", "BV", "BV"]), arg("BV", "arg0")]
    rules += [lit("BV", v) for v in literals]
    rules += [lit("B", True), lit("B", False)]
    rules += [op(n, "B", ["BV", "BV"]) for n in ("isEqual", "ult", "ule", "slt", "sle", "ugt")]
    rules += [op("redor", "B", ["BV"]), op("and", "B", ["BV", "BV"]), op("or", "B", ["BV", "BV"]), op("not", "B", ["BV"])]
    rules += [op(n, "B", ["BV", "BV"]) for n in ("uge", "sge", "sgt")]
    return {"types": ["BV", "B"], "initial": "BV", "rules": rules}


dump("data/grammars/bitvectors.json", bv_dsl(["0x0", "0x1"]))
dump("suites/bitvectors/grammar.json", bv_dsl(["0x0", "0x1"]))

XS = [0, 1, 6, 12, 0x58, 0xF0F0, 0x8000000000000000, M, 0x123456789ABCDEF0]


def bvtask(name, f):
    exs = [{"inputs": {"arg0": "0x%x" % x}, "output": "0x%x" % (f(x) & M)} for x in XS]
    return {"name": name, "domain": "bitvectors", "arguments": ["arg0"], "examples": exs}


bv_tasks = [
    bvtask("clear_lowest_set", lambda x: x & (x - 1)),
    bvtask("isolate_lowest_set", lambda x: x & -x),
    bvtask("smear_lowest_set", lambda x: x | (x - 1)),
    bvtask("set_lowest_clear", lambda x: x | (x + 1)),
    bvtask("isolate_lowest_clear", lambda x: ~x & (x + 1)),
    bvtask("trailing_zero_mask", lambda x: ~x & (x - 1)),
    bvtask("gray_code", lambda x: x ^ (x >> 1)),
    bvtask("clear_bit_zero", lambda x: x & ~1),
]
for t in bv_tasks:
    dump("suites/bitvectors/%s.json" % t["name"], t)
