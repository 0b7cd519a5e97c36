#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# isacsim - coupled ISAC channel simulation and analysis
# Copyright (C) 2026 The isacsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Writes the scenario fixtures in fixtures/.

Hall geometry: Tx horn at (0, 0, 1.4) looking along +y, Rx omni 24 m away.
Environment power is split 88.93 % LoS, 9.437 % clutter between 70 and 110
deg behind the LoS, and 1.633 % on the wing edges (110-150 deg) and walls.
Nothing departs between 30 and 70 deg. Every path has its own PADP cell.
"""

import json
import math
import random
from pathlib import Path

C = 299792458.0
CARRIER = 105e9
LAM = C / CARRIER
OUT = Path(__file__).resolve().parent.parent / "fixtures"

TX = (0.0, 0.0, 1.4)
RX = (0.0, 24.0, 1.4)
G_TX = 10 ** 2.5  # 25 dBi horn
G_RX = 10 ** 0.3  # 3 dBi omni

LOS_DELAY = 24.0 / C
# free-space LoS power sets the absolute scale
P_LOS = (LAM / (4 * math.pi * 24.0)) ** 2 * G_TX * G_RX
P_ENV = P_LOS / 0.8893

HEADER = "cluster,path,origin,amp_re,amp_im,delay_s,aod_deg,zod_deg,aoa_deg,zoa_deg,doppler_hz,phase_rad"


def num(x):
    return "0" if x == 0 else repr(float(x))


def env_paths():
    rng = random.Random(20260105)
    paths = []

    def add(cluster, index, share, delay, aod, aoa):
        phase = rng.uniform(0.0, 2 * math.pi)
        amp = math.sqrt(share * P_ENV)
        paths.append(dict(cluster=cluster, path=index, amp=(amp * math.cos(phase), amp * math.sin(phase)),
                          delay=delay, aod=aod, zod=90.0, aoa=aoa, zoa=90.0, phase=phase))

    add(1, 1, 0.8893, LOS_DELAY, 90.0, 270.0)

    clutter = [(75.0, 95e-9, 0.20), (80.0, 110e-9, 0.15), (85.0, 130e-9, 0.10), (95.0, 105e-9, 0.15),
               (100.0, 150e-9, 0.10), (105.0, 175e-9, 0.05), (90.0, 120e-9, 0.15), (90.0, 200e-9, 0.10)]
    for m, (aod, delay, w) in enumerate(clutter, start=1):
        add(2, m, 0.09437 * w, delay, aod, 300.0 - 2.0 * m)

    for cluster, base_delay, share in ((3, 91e-9, 0.004), (4, 120e-9, 0.003)):
        for k in range(9):
            add(cluster, k + 1, share / 9.0, base_delay + k * 0.1e-9, 110.4 + 5.0 * k, 200.0 + 3.0 * k)

    for m, (aod, delay) in enumerate(((5.4, 100e-9), (10.4, 130e-9), (15.4, 160e-9)), start=1):
        add(5, m, 0.006 / 3.0, delay, aod, 340.0 - 5.0 * m)
    for m, (aod, delay) in enumerate(((170.4, 140e-9), (175.4, 180e-9)), start=1):
        add(6, m, 0.00333 / 2.0, delay, aod, 190.0 + 5.0 * m)
    return paths


def write_paths_csv(name, paths):
    lines = [HEADER]
    for p in paths:
        lines.append(",".join([str(p["cluster"]), str(p["path"]), "env", num(p["amp"][0]), num(p["amp"][1]),
                               num(p["delay"]), num(p["aod"]), num(p["zod"]), num(p["aoa"]), num(p["zoa"]), "0",
                               num(p["phase"])]))
    (OUT / name).write_text("\n".join(lines) + "\n")


def base_config(name, description):
    return {
        "name": name,
        "description": description,
        "carrier_hz": CARRIER,
        "rng_seed": 105,
        "timestamp_s": 0.0,
        "tx": {"id": 1, "pattern": "horn", "location_m": list(TX), "boresight_az_deg": 90.0,
               "boresight_zen_deg": 90.0},
        "rx": {"id": 1, "pattern": "omni", "location_m": list(RX)},
        "axes": {"angle_deg": {"start": 0.0, "stop": 180.0, "step": 5.0},
                 "delay_s": {"start": 0.0, "stop": 250e-9, "step": 1e-9},
                 "truncate_range_m": 75.0, "out_of_range": "drop"},
        "environment": {"paths_csv": "point0_env.csv"},
    }


def on_bearing(distance, az_deg):
    a = math.radians(az_deg)
    return [TX[0] + distance * math.cos(a), TX[1] + distance * math.sin(a), 1.4]


def target(position, **extra):
    t = {"id": 1, "position_m": position, "w1_m": 0.35, "w2_m": 0.35, "h1_m": 0.2, "h2_m": 1.4,
         "velocity_mps": [0.0, 0.0, 0.0], "rcs": {"sigma_m2": 1.0}}
    t.update(extra)
    return t


def save(name, cfg):
    (OUT / name).write_text(json.dumps(cfg, indent=2) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    write_paths_csv("point0_env.csv", env_paths())

    save("point0.json", base_config("point0", "Environment only, no sensing target."))

    # Point 2: target on the LoS where it subtends 6.7 deg.
    d2 = 0.35 / math.tan(math.radians(3.35))
    st_leg = d2 / C
    echo_delay = 146.7e-9
    tx_amp = math.sqrt(G_TX) / (math.sqrt(4 * math.pi) * d2)
    rx_amp = math.sqrt(0.00085490 * P_ENV) / tx_amp
    cfg = base_config("point2", "Target on the LoS 5.98 m from the Tx; LoS coupled at -20 dB, "
                                "other blocked paths removed; one wall echo of the target.")
    cfg["targets"] = [target([0.0, d2, 1.4],
                             tx_link=[{"cluster": 1, "path": 1, "amp_re": tx_amp, "amp_im": 0.0, "delay_s": st_leg,
                                       "aod_deg": 90.0, "zod_deg": 90.0, "aoa_deg": 270.0, "zoa_deg": 90.0}],
                             rx_link=[{"cluster": 1, "path": 1, "amp_re": rx_amp, "amp_im": 0.0,
                                       "delay_s": echo_delay - st_leg, "aod_deg": 270.0, "zod_deg": 90.0,
                                       "aoa_deg": 270.0, "zoa_deg": 90.0}])]
    cfg["coupling"] = {"mode": "explicit", "default_fs_cf_lin": 0.0,
                       "explicit": [{"cluster": 1, "path": 1, "fs_cf_lin": 0.01}]}
    save("point2.json", cfg)

    # Point 1: target 4 m from the Tx on the LoS, FS-CF from 4KED-G.
    cfg = base_config("point1", "Target on the LoS 4 m from the Tx; FS-CF from the gain-weighted "
                                "four-knife-edge model.")
    cfg["targets"] = [target([0.0, 4.0, 1.4])]
    cfg["coupling"] = {"mode": "los_4kedg"}
    save("point1.json", cfg)

    # Point 6: NLoS target at 130 deg subtending 7.8 deg; wing-edge paths forward scattered.
    d6 = 0.35 / math.tan(math.radians(3.9))
    rng = random.Random(6)
    draws = [rng.gauss(0.066, math.sqrt(0.253)) for _ in range(18)]
    shift = 0.066 - sum(draws) / len(draws)
    values = [v + shift for v in draws]
    explicit = []
    for i, v in enumerate(values):
        explicit.append({"cluster": 3 + i // 9, "path": i % 9 + 1, "fs_cf_db": v})
    cfg = base_config("point6", "NLoS target at 130 deg; the 18 wing-edge paths are forward scattered "
                                "with tabulated FS-CF values.")
    cfg["targets"] = [target(on_bearing(d6, 130.0))]
    cfg["coupling"] = {"mode": "explicit", "explicit": explicit}
    save("point6.json", cfg)

    cfg = base_config("point6_nlos", "NLoS target at 130 deg with FS-CF drawn from the fitted normal law.")
    cfg["targets"] = [target(on_bearing(d6, 130.0))]
    cfg["coupling"] = {"mode": "nlos_normal", "nlos": {"mean_db": 0.066, "var_db2": 0.253}}
    save("point6_nlos.json", cfg)

    # Point 7: target at 50 deg where no environment path departs.
    cfg = base_config("point7", "Target at 50 deg outside every propagation path: no interaction.")
    cfg["targets"] = [target(on_bearing(5.0, 50.0), rcs={"table_csv": "rcs_agv.csv", "interpolation": "bilinear",
                                                          "fallback_sigma_m2": 1.0})]
    cfg["coupling"] = {"mode": "los_4kedg"}
    save("point7.json", cfg)

    # Bistatic RCS of the AGV on a coarse grid.
    rows = ["theta_in,phi_in,theta_out,phi_out,sigma_m2"]
    angles_t = [60.0, 90.0, 120.0]
    angles_p = [0.0, 90.0, 180.0, 270.0, 360.0]
    for ti in angles_t:
        for pi_ in angles_p:
            for to in angles_t:
                for po in angles_p:
                    bistatic = math.radians(po - pi_)
                    sigma = 0.5 + 0.4 * math.cos(bistatic) ** 2 + 0.1 * math.sin(math.radians(ti)) * math.sin(math.radians(to))
                    rows.append(",".join(num(v) for v in (ti, pi_, to, po, sigma)))
    (OUT / "rcs_agv.csv").write_text("\n".join(rows) + "\n")

    # Diffraction sweep of Point 1.
    save("point1_diffract.json", {
        "carrier_hz": CARRIER, "tx_m": list(TX), "rx_m": list(RX),
        "screen": {"center_m": [0.0, 4.0, 1.4], "w1_m": 0.35, "w2_m": 0.35, "h1_m": 0.2, "h2_m": 1.4},
        "aod_deg": {"start": 70.0, "stop": 110.0, "step": 1.0},
        "model": "4kedg", "tx_antenna": "horn", "rx_antenna": "omni"})

    # Malformed configs for diagnostics.
    bad = base_config("bad_carrier", "Negative carrier.")
    bad["carrier_hz"] = -1.0
    save("bad_carrier.json", bad)
    bad = base_config("bad_env", "No environment.")
    del bad["environment"]
    save("bad_env.json", bad)


if __name__ == "__main__":
    main()
