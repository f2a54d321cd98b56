#!/usr/bin/env python3
"""Regenerate the ARFF files under data/ from redistributed UCI copies.

The UCI repository is not reachable from every build environment, so the
datasets are taken from two PyPI wheels that ship them verbatim:

  keel_ds  - KEEL exports of segment, pendigits (penbased), vowel, satimage,
             texture, led7digit and movement_libras (headerless CSV).
  Orange3  - zoo.tab with the original animal names and type labels.

Usage: make_datasets.py KEEL_WHEEL ORANGE_WHEEL [OUT_DIR]
(fetch the wheels with `pip download --no-deps keel_ds Orange3`).
"""
import io
import sys
import zipfile

KEEL = {
    # name in data/ : (keel file, relation, leading nominal columns)
    "segment": ("segment", "segment", {}),
    "pendigits": ("penbased", "pendigits", {}),
    "vowel": ("vowel", "vowel", {
        0: ("Train_or_Test", ["0", "1"]),
        1: ("Speaker_Number", [str(i) for i in range(15)]),
        2: ("Sex", ["0", "1"]),
    }),
    "satimage": ("satimage", "satimage", {}),
    "texture": ("texture", "texture", {}),
    "led7digit": ("led7digit", "led7digit", {}),
    "libras": ("movement_libras", "movement_libras", {}),
}

SEGMENT_NAMES = [
    "region-centroid-col", "region-centroid-row", "region-pixel-count",
    "short-line-density-5", "short-line-density-2", "vedge-mean", "vedge-sd",
    "hedge-mean", "hedge-sd", "intensity-mean", "rawred-mean", "rawblue-mean",
    "rawgreen-mean", "exred-mean", "exblue-mean", "exgreen-mean", "value-mean",
    "saturation-mean", "hue-mean",
]


def number(tok):
    v = float(tok)
    return repr(int(v)) if v.is_integer() else tok


def label_key(v):
    try:
        return (0, float(v))
    except ValueError:
        return (1, v)


def write_arff(path, relation, attrs, rows):
    with open(path, "w") as f:
        f.write(f"@relation {relation}\n\n")
        for name, values in attrs:
            kind = "numeric" if values is None else "{" + ",".join(values) + "}"
            f.write(f"@attribute {name} {kind}\n")
        f.write("\n@data\n")
        for r in rows:
            f.write(",".join(r) + "\n")


def convert_keel(wheel, out_dir):
    z = zipfile.ZipFile(wheel)
    for out, (src, relation, nominal) in KEEL.items():
        text = z.read(f"keel_ds/data/balanced/raw/{src}.dat").decode()
        rows = [[t.strip() for t in line.split(",")] for line in text.splitlines() if line.strip()]
        width = len(rows[0])
        attrs = []
        for j in range(width - 1):
            if j in nominal:
                attrs.append(nominal[j])
                for r in rows:
                    r[j] = str(int(float(r[j])))
            else:
                name = SEGMENT_NAMES[j] if out == "segment" else f"a{j + 1}"
                attrs.append((name, None))
                for r in rows:
                    r[j] = number(r[j])
        for r in rows:
            r[-1] = str(int(float(r[-1])))
        labels = sorted({r[-1] for r in rows}, key=label_key)
        attrs.append(("class", labels))
        write_arff(f"{out_dir}/{out}.arff", relation, attrs, rows)


def convert_zoo(wheel, out_dir):
    z = zipfile.ZipFile(wheel)
    lines = z.read("Orange/datasets/zoo.tab").decode().splitlines()
    header = lines[0].split("\t")
    body = [l.split("\t") for l in lines[3:] if l.strip()]
    # "frog" occurs twice in the original data; the second copy gets a suffix
    # so the name attribute stays a duplicate-free nominal.
    seen = {}
    for r in body:
        n = r[0]
        seen[n] = seen.get(n, 0) + 1
        if seen[n] > 1:
            r[0] = f"{n}{seen[n]}"
    types = ["mammal", "bird", "reptile", "fish", "amphibian", "insect", "invertebrate"]
    attrs = [("animal", [r[0] for r in body])]
    for name in header[1:-1]:
        if name == "legs":
            attrs.append((name, None))
        else:
            attrs.append((name, ["false", "true"]))
    attrs.append(("type", types))
    rows = []
    for r in body:
        row = [r[0]]
        for name, v in zip(header[1:-1], r[1:-1]):
            row.append(v if name == "legs" else ("true" if v == "1" else "false"))
        row.append(r[-1])
        rows.append(row)
    write_arff(f"{out_dir}/zoo.arff", "zoo", attrs, rows)


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.exit(__doc__)
    out_dir = sys.argv[3] if len(sys.argv) > 3 else "data"
    convert_keel(sys.argv[1], out_dir)
    convert_zoo(sys.argv[2], out_dir)
