#!/usr/bin/env python3
# Copyright 2026 The secslice Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled demo detector model, its parity fixtures and the
attack replay stream.

Records are drawn from KDD-style connection profiles (benign web/mail/dns and
the classic neptune/smurf/back/portsweep/teardrop/ipsweep attacks) so that the
simulator can run without the original datasets. The classifier is a
scikit-learn gradient-boosted ensemble exported to the portable JSON format;
reference probabilities come from sklearn's own predict_proba, which keeps the
fixtures independent of the C++ inference path.

    python3 tools/bundled_model/make_bundled_model.py --out data
"""

import argparse
import hashlib
import json
import math
import os

import numpy as np
from sklearn.ensemble import GradientBoostingClassifier
from sklearn.model_selection import train_test_split

VOCAB_VERSION = "kdd5-v1"
PROTOCOLS = ["tcp", "udp", "icmp"]
SERVICES = ["http", "smtp", "domain_u", "ecr_i", "private"]
FLAGS = ["SF", "S0", "REJ", "RSTR"]


def lognormal_int(rng, median, sigma, lo, hi):
    v = rng.lognormal(math.log(median), sigma)
    return int(min(max(v, lo), hi))


# (name, weight, label, sampler) -> (protocol, service, flag, src, dst, payload)
def benign_http(rng):
    return ("tcp", "http", "SF", lognormal_int(rng, 230, 0.4, 80, 1500),
            lognormal_int(rng, 3000, 1.2, 100, 200000), 1500)


def benign_smtp(rng):
    return ("tcp", "smtp", "SF", lognormal_int(rng, 1200, 0.6, 200, 20000),
            lognormal_int(rng, 330, 0.2, 150, 800), 1200)


def benign_dns(rng):
    return ("udp", "domain_u", "SF", int(rng.integers(28, 60)),
            int(rng.integers(40, 200)), 120)


def benign_ping(rng):
    return ("icmp", "ecr_i", "SF", int(rng.choice([8, 20, 30])),
            0, 84)


def benign_ftp(rng):
    return ("tcp", "ftp_data", "SF", lognormal_int(rng, 800, 1.5, 1, 500000),
            0, 1500)


def benign_rej(rng):
    return ("tcp", "http", "REJ", 0, 0, 60)


def neptune(rng):
    return ("tcp", "private", str(rng.choice(["S0", "S0", "S0", "REJ"])), 0, 0, 60)


def smurf(rng):
    return ("icmp", "ecr_i", "SF", int(rng.choice([520, 1032])), 0,
            int(rng.choice([548, 1060])))


def back(rng):
    return ("tcp", "http", "SF", 54540, int(rng.choice([8314, 7300])), 1500)


def portsweep(rng):
    return ("tcp", "private", "RSTR", 0, 0, 60)


def teardrop(rng):
    return ("udp", "private", "SF", 28, 0, 64)


def ipsweep(rng):
    return ("icmp", "eco_i", "SF", 8, 0, 64)


BENIGN = [(benign_http, 0.55), (benign_smtp, 0.12), (benign_dns, 0.18),
          (benign_ping, 0.05), (benign_ftp, 0.08), (benign_rej, 0.02)]
ATTACK = [(neptune, 0.55), (smurf, 0.25), (back, 0.04), (portsweep, 0.06),
          (teardrop, 0.04), (ipsweep, 0.06)]


def draw(rng, table, n):
    fns = [f for f, _ in table]
    w = np.array([p for _, p in table])
    idx = rng.choice(len(fns), size=n, p=w / w.sum())
    return [fns[i](rng) for i in idx]


def encode(rec):
    proto, service, flag, src, dst = rec[:5]
    v = [1.0 if proto == p else 0.0 for p in PROTOCOLS]
    v += [1.0 if service == s else 0.0 for s in SERVICES]
    v += [1.0 if flag == f else 0.0 for f in FLAGS]
    v += [math.log1p(src), math.log1p(dst)]
    return v


def feature_names():
    return ([f"protocol_type={p}" for p in PROTOCOLS] +
            [f"service={s}" for s in SERVICES] +
            [f"flag={f}" for f in FLAGS] + ["src_bytes", "dst_bytes"])


def export_tree(est, scale):
    t = est.tree_
    nodes = []
    for i in range(t.node_count):
        if t.children_left[i] == -1:
            nodes.append({"leaf": float(t.value[i][0][0] * scale)})
        else:
            nodes.append({"feature": int(t.feature[i]),
                          "threshold": float(t.threshold[i]),
                          "left": int(t.children_left[i]),
                          "right": int(t.children_right[i])})
    return {"nodes": nodes}


def walk(model, x):
    raw = model["bias"]
    for tree in model["trees"]:
        nodes = tree["nodes"]
        i = 0
        while "leaf" not in nodes[i]:
            n = nodes[i]
            i = n["left"] if x[n["feature"]] <= n["threshold"] else n["right"]
        raw += nodes[i]["leaf"]
    return 1.0 / (1.0 + math.exp(-raw))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--records", type=int, default=20000)
    ap.add_argument("--label-noise", type=float, default=0.005)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n_benign = args.records // 2
    benign = draw(rng, BENIGN, n_benign)
    attack = draw(rng, ATTACK, args.records - n_benign)
    records = benign + attack
    labels = np.array([0] * len(benign) + [1] * len(attack))
    flip = rng.random(len(labels)) < args.label_noise
    labels = np.where(flip, 1 - labels, labels)

    X = np.array([encode(r) for r in records])
    X_tr, X_te, y_tr, y_te, r_tr, r_te = train_test_split(
        X, labels, records, test_size=0.2, stratify=labels,
        random_state=args.seed)

    lr = 0.1
    clf = GradientBoostingClassifier(n_estimators=100, max_depth=6,
                                     learning_rate=lr,
                                     random_state=args.seed)
    clf.fit(X_tr, y_tr)
    acc = float((clf.predict(X_te) == y_te).mean())

    prior = float(clf.init_.class_prior_[1])
    bias = math.log(prior / (1.0 - prior))
    trees = [export_tree(est[0], lr) for est in clf.estimators_]
    digest = hashlib.sha256(X_tr.tobytes() + y_tr.tobytes()).hexdigest()
    model = {
        "format": "secslice-gbdt",
        "format_version": 1,
        "schema": {
            "vocab_version": VOCAB_VERSION,
            "protocol_type": PROTOCOLS,
            "service": SERVICES,
            "flag": FLAGS,
            "numeric": [{"name": "src_bytes", "transform": "log1p"},
                        {"name": "dst_bytes", "transform": "log1p"}],
            "features": feature_names(),
        },
        "bias": bias,
        "output": "logistic",
        "threshold": 0.5,
        "max_depth": 6,
        "trees": trees,
        "metadata": {
            "dataset": "kdd-profile-synthetic",
            "training_hash": digest,
            "n_trees": len(trees),
            "learning_rate": lr,
            "seed": args.seed,
            "held_out_accuracy": acc,
        },
    }

    # Self-check: a double-precision walk of the exported trees must agree
    # with sklearn (which compares in float32) on every held-out row.
    ref = clf.predict_proba(X_te)[:, 1]
    mine = np.array([walk(model, x) for x in X_te])
    worst = float(np.max(np.abs(ref - mine)))
    assert worst < 1e-9, f"exported model disagrees with sklearn: {worst}"

    os.makedirs(os.path.join(args.out, "model"), exist_ok=True)
    os.makedirs(os.path.join(args.out, "replay"), exist_ok=True)
    with open(os.path.join(args.out, "model", "detector_gbdt.json"), "w") as f:
        json.dump(model, f, indent=1, sort_keys=True)
        f.write("\n")

    # Fixtures: 50 held-out rows, both classes, including an out-of-vocabulary
    # service so the all-zeros path is covered.
    pick = []
    for cls in (0, 1):
        idx = np.flatnonzero(y_te == cls)[:25]
        pick.extend(int(i) for i in idx)
    oov = [i for i in range(len(r_te)) if r_te[i][1] not in SERVICES]
    if oov and oov[0] not in pick:
        pick[-1] = oov[0]
    rows = []
    for i in pick:
        rec = r_te[i]
        rows.append({
            "features": {"protocol_type": rec[0], "service": rec[1],
                         "flag": rec[2], "src_bytes": rec[3],
                         "dst_bytes": rec[4]},
            "vector": [float(v) for v in X_te[i]],
            "probability": float(ref[i]),
            "label": int(y_te[i]),
        })
    with open(os.path.join(args.out, "model", "fixtures.json"), "w") as f:
        json.dump({"vocab_version": VOCAB_VERSION, "model": "detector_gbdt.json",
                   "rows": rows}, f, indent=1, sort_keys=True)
        f.write("\n")

    # Attack replay stream: fresh attack-profile records.
    replay = draw(np.random.default_rng(args.seed + 1), ATTACK, 4000)
    with open(os.path.join(args.out, "replay", "attack_records.csv"), "w") as f:
        f.write(f"# vocab_version={VOCAB_VERSION}\n")
        f.write("protocol_type,service,flag,src_bytes,dst_bytes,payload_bytes,label\n")
        for r in replay:
            f.write(f"{r[0]},{r[1]},{r[2]},{r[3]},{r[4]},{r[5]},1\n")

    mean_payload = sum(r[5] for r in replay) / len(replay)
    print(f"held-out accuracy {acc:.4f}; parity self-check max |dp| {worst:.2e}; "
          f"replay mean payload {mean_payload:.1f} B")


if __name__ == "__main__":
    main()
