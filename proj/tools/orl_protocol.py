#!/usr/bin/env python3
"""Run the sensitivity/specificity protocol on a local copy of the ORL faces.

Expects the usual layout: <root>/s1/1.pgm ... <root>/s40/10.pgm. Enrolled
subjects contribute their first --train images as training samples and the
rest as positive probes. A seeded random set of --impostors subjects is held
out entirely and supplies the negative probes, since a probe whose identity is
enrolled cannot be counted as a true negative under nearest-class-mean
matching.

The output is informational; there is no pass threshold.
"""

import argparse
import pathlib
import random
import subprocess
import sys


def subjects(root):
    dirs = [d for d in root.iterdir() if d.is_dir() and d.name.startswith("s") and d.name[1:].isdigit()]
    return sorted(dirs, key=lambda d: int(d.name[1:]))


def images(subject_dir):
    return sorted(subject_dir.glob("*.pgm"), key=lambda p: int(p.stem) if p.stem.isdigit() else p.stem)


def write_manifest(root, out_dir, n_train, n_impostors, seed):
    subs = subjects(root)
    if len(subs) <= n_impostors:
        sys.exit(f"need more than {n_impostors} subjects under {root}, found {len(subs)}")
    rng = random.Random(seed)
    held_out = set(rng.sample([s.name for s in subs], n_impostors))
    rows = []
    for s in subs:
        files = images(s)
        for i, f in enumerate(files):
            if s.name in held_out:
                role = "negative-test"
            else:
                role = "train" if i < n_train else "positive-test"
            rows.append(f"{f.resolve()},{s.name},{role}")
    manifest = out_dir / "orl_manifest.csv"
    manifest.write_text("path,label,role\n" + "\n".join(rows) + "\n")
    return manifest, sorted(held_out)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("root", type=pathlib.Path, help="ORL directory containing s1..s40")
    ap.add_argument("--gkeca", default="build/gkeca", help="path to the gkeca executable")
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("orl_run"))
    ap.add_argument("--train", type=int, default=2, help="training images per enrolled subject")
    ap.add_argument("--impostors", type=int, default=5, help="subjects held out as impostors")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--config", help="optional gkeca config file")
    ap.add_argument("--tau-sweep", default=None, help="lo:hi:count passed to gkeca eval")
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    manifest, held_out = write_manifest(args.root, args.out, args.train, args.impostors, args.seed)
    print(f"seed {args.seed}: impostor subjects {', '.join(held_out)}", flush=True)

    common = ["--seed", str(args.seed)]
    if args.config:
        common += ["--config", args.config]
    model = args.out / "orl.model"
    subprocess.run([args.gkeca, "fit", "--manifest", str(manifest), "--out", str(model), *common], check=True)
    cmd = [args.gkeca, "eval", "--manifest", str(manifest), "--model", str(model), "--measure", "all",
           "--out", str(args.out / "orl_report.csv"), *common]
    if args.tau_sweep:
        cmd += ["--tau_sweep", args.tau_sweep]
    subprocess.run(cmd, check=True)


if __name__ == "__main__":
    main()
