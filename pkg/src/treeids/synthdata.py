"""Deterministic desk-scale corpus in NSL-KDD record format.

Produces labeled connection records whose attack types carry the kind
of near-deterministic signatures the real corpus is known for (syn
floods with S0 flags and saturated error rates, probes with REJ/rerror
patterns, remote-to-local logins with failed-password counts, rootkit
sessions with root-shell markers), plus benign traffic profiles. Useful
for tests, demos and experiment dry-runs when the real corpus is not on
disk; the generator is seeded and reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import random

FEATURE_NAMES = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
    "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)
_IDX = {name: i for i, name in enumerate(FEATURE_NAMES)}

# label mix: (label, weight); attack weights emulate the usual skew
MIX = (
    ("normal", 5200),
    # DoS
    ("neptune", 1620), ("smurf", 900), ("back", 290), ("teardrop", 215),
    ("pod", 145), ("land", 70), ("apache2", 145), ("mailbomb", 70),
    ("processtable", 110), ("udpstorm", 35),
    # Probe
    ("satan", 240), ("ipsweep", 200), ("portsweep", 160), ("nmap", 120),
    ("mscan", 56), ("saint", 24),
    # R2L
    ("guess_passwd", 83), ("warezclient", 66), ("warezmaster", 33),
    ("imap", 17), ("multihop", 17), ("phf", 17), ("snmpguess", 40),
    ("snmpgetattack", 23), ("httptunnel", 26), ("worm", 10),
    # U2R
    ("buffer_overflow", 21), ("rootkit", 14), ("loadmodule", 11),
    ("perl", 7), ("ps", 11), ("xterm", 7),
)


def _base(rng: random.Random) -> dict:
    row = {name: 0 for name in FEATURE_NAMES}
    row["protocol_type"] = "tcp"
    row["service"] = "http"
    row["flag"] = "SF"
    row["same_srv_rate"] = 1.0
    row["dst_host_count"] = rng.randint(60, 255)
    row["dst_host_srv_count"] = rng.randint(60, 255)
    row["dst_host_same_srv_rate"] = _r2(rng.uniform(0.85, 1.0))
    return row


def _rate(rng, lo, hi):
    return _r2(rng.uniform(lo, hi))


def _r2(x: float) -> float:
    return round(x, 2)


def _normal(rng: random.Random) -> dict:
    row = _base(rng)
    kind = rng.random()
    if kind < 0.40:
        row["service"] = "http"
        row["src_bytes"] = rng.randint(150, 400)
        row["dst_bytes"] = rng.randint(500, 12000)
        row["logged_in"] = 1
    elif kind < 0.60:
        row["service"] = "smtp"
        row["src_bytes"] = rng.randint(600, 1800)
        row["dst_bytes"] = rng.randint(250, 500)
        row["logged_in"] = 1
    elif kind < 0.75:
        row["service"] = "ftp_data"
        row["src_bytes"] = rng.randint(300, 30000)
        row["logged_in"] = 1
    elif kind < 0.90:
        row["protocol_type"] = "udp"
        row["service"] = "domain_u"
        row["src_bytes"] = rng.randint(40, 70)
        row["dst_bytes"] = rng.randint(40, 200)
    else:
        row["service"] = rng.choice(("telnet", "other", "ftp"))
        row["duration"] = rng.randint(0, 30)
        row["src_bytes"] = rng.randint(100, 2000)
        row["dst_bytes"] = rng.randint(100, 4000)
        row["logged_in"] = 1
        # benign admin sessions and fat-fingered logins overlap the
        # remote-exploit signatures on single features
        if rng.random() < 0.10:
            row["num_failed_logins"] = 1
        if rng.random() < 0.08:
            row["root_shell"] = 1
            row["num_root"] = rng.randint(1, 3)
        if rng.random() < 0.08:
            row["hot"] = rng.randint(1, 2)
    row["count"] = rng.randint(1, 20)
    row["srv_count"] = rng.randint(1, max(1, row["count"]))
    row["dst_host_same_src_port_rate"] = _rate(rng, 0.0, 0.55)
    # sporadic benign failures keep the boundary from being a single test
    if rng.random() < 0.01:
        row["flag"] = "REJ"
        row["rerror_rate"] = 1.0
    return row


def _attack_common(rng: random.Random, row: dict) -> dict:
    # attack tooling tends to reuse source ports, but the overlap with
    # benign traffic is wide: detection has to come from the family
    # signatures, not from one giveaway column
    row["dst_host_same_src_port_rate"] = _rate(rng, 0.30, 1.0)
    return row


_PROFILES = {}


def _profile(name):
    def wrap(fn):
        _PROFILES[name] = fn
        return fn

    return wrap


@_profile("neptune")
def _neptune(rng):
    row = _base(rng)
    row["service"] = rng.choice(("private", "telnet", "http"))
    row["flag"] = "S0"
    row["count"] = rng.randint(100, 511)
    row["srv_count"] = rng.randint(1, 20)
    row["serror_rate"] = _rate(rng, 0.95, 1.0)
    row["srv_serror_rate"] = _rate(rng, 0.9, 1.0)
    row["dst_host_serror_rate"] = _rate(rng, 0.9, 1.0)
    row["dst_host_srv_serror_rate"] = _rate(rng, 0.9, 1.0)
    row["same_srv_rate"] = _rate(rng, 0.0, 0.1)
    return row


@_profile("smurf")
def _smurf(rng):
    row = _base(rng)
    row["protocol_type"] = "icmp"
    row["service"] = "ecr_i"
    row["src_bytes"] = rng.choice((1032, 520))
    row["count"] = rng.randint(200, 511)
    row["srv_count"] = row["count"]
    return row


@_profile("back")
def _back(rng):
    row = _base(rng)
    row["src_bytes"] = rng.randint(50000, 60000)
    row["dst_bytes"] = rng.randint(2000, 9000)
    row["hot"] = 2
    row["logged_in"] = 1
    row["count"] = rng.randint(2, 12)
    return row


@_profile("teardrop")
def _teardrop(rng):
    row = _base(rng)
    row["protocol_type"] = "udp"
    row["service"] = "private"
    row["wrong_fragment"] = 3
    row["count"] = rng.randint(40, 200)
    row["srv_count"] = row["count"]
    return row


@_profile("pod")
def _pod(rng):
    row = _base(rng)
    row["protocol_type"] = "icmp"
    row["service"] = "ecr_i"
    row["wrong_fragment"] = 1
    row["src_bytes"] = 1480
    row["count"] = rng.randint(1, 30)
    return row


@_profile("land")
def _land(rng):
    row = _base(rng)
    row["flag"] = "S0"
    row["service"] = rng.choice(("telnet", "http"))
    row["land"] = 1
    row["serror_rate"] = 1.0
    row["count"] = rng.randint(1, 10)
    return row


@_profile("apache2")
def _apache2(rng):
    row = _base(rng)
    row["src_bytes"] = rng.randint(15000, 40000)
    row["count"] = rng.randint(100, 400)
    row["srv_count"] = row["count"]
    row["dst_host_same_srv_rate"] = 1.0
    return row


@_profile("mailbomb")
def _mailbomb(rng):
    row = _base(rng)
    row["service"] = "smtp"
    row["src_bytes"] = rng.randint(1200, 2500)
    row["count"] = rng.randint(80, 300)
    row["srv_count"] = row["count"]
    return row


@_profile("processtable")
def _processtable(rng):
    row = _base(rng)
    row["service"] = "telnet"
    row["flag"] = rng.choice(("S0", "S1"))
    row["duration"] = rng.randint(100, 800)
    row["count"] = rng.randint(60, 250)
    row["serror_rate"] = _rate(rng, 0.7, 1.0)
    return row


@_profile("udpstorm")
def _udpstorm(rng):
    row = _base(rng)
    row["protocol_type"] = "udp"
    row["service"] = "echo"
    row["src_bytes"] = rng.randint(1, 100)
    row["count"] = rng.randint(300, 511)
    row["srv_count"] = row["count"]
    return row


@_profile("satan")
def _satan(rng):
    row = _base(rng)
    row["service"] = rng.choice(("private", "other", "telnet", "http"))
    row["flag"] = rng.choice(("REJ", "SF"))
    row["rerror_rate"] = _rate(rng, 0.5, 1.0)
    row["diff_srv_rate"] = _rate(rng, 0.6, 1.0)
    row["dst_host_diff_srv_rate"] = _rate(rng, 0.6, 1.0)
    row["same_srv_rate"] = _rate(rng, 0.0, 0.25)
    row["count"] = rng.randint(2, 30)
    return row


@_profile("ipsweep")
def _ipsweep(rng):
    row = _base(rng)
    row["protocol_type"] = "icmp"
    row["service"] = "eco_i"
    row["src_bytes"] = rng.choice((8, 18, 20))
    row["count"] = rng.randint(1, 6)
    row["srv_diff_host_rate"] = _rate(rng, 0.5, 1.0)
    row["dst_host_count"] = rng.randint(1, 60)
    return row


@_profile("portsweep")
def _portsweep(rng):
    row = _base(rng)
    row["service"] = "private"
    row["flag"] = rng.choice(("REJ", "RSTR"))
    row["rerror_rate"] = _rate(rng, 0.8, 1.0)
    row["srv_rerror_rate"] = _rate(rng, 0.8, 1.0)
    row["dst_host_rerror_rate"] = _rate(rng, 0.7, 1.0)
    row["diff_srv_rate"] = _rate(rng, 0.5, 1.0)
    row["duration"] = rng.randint(0, 4)
    return row


@_profile("nmap")
def _nmap(rng):
    row = _base(rng)
    row["protocol_type"] = rng.choice(("tcp", "icmp"))
    row["service"] = "eco_i" if row["protocol_type"] == "icmp" else "private"
    row["flag"] = rng.choice(("SF", "S0"))
    row["src_bytes"] = rng.randint(0, 30)
    row["diff_srv_rate"] = _rate(rng, 0.5, 1.0)
    row["dst_host_diff_srv_rate"] = _rate(rng, 0.5, 1.0)
    row["count"] = rng.randint(1, 8)
    return row


@_profile("mscan")
def _mscan(rng):
    row = _base(rng)
    row["service"] = rng.choice(("http", "telnet", "ftp"))
    row["flag"] = "REJ"
    row["rerror_rate"] = 1.0
    row["srv_rerror_rate"] = 1.0
    row["diff_srv_rate"] = _rate(rng, 0.7, 1.0)
    row["dst_host_rerror_rate"] = _rate(rng, 0.8, 1.0)
    row["count"] = rng.randint(4, 40)
    return row


@_profile("saint")
def _saint(rng):
    row = _satan(rng)
    row["duration"] = rng.randint(1, 10)
    row["srv_diff_host_rate"] = _rate(rng, 0.4, 1.0)
    return row


@_profile("guess_passwd")
def _guess_passwd(rng):
    row = _base(rng)
    row["service"] = rng.choice(("ftp", "telnet"))
    row["duration"] = rng.randint(1, 6)
    row["num_failed_logins"] = rng.randint(2, 6)
    row["src_bytes"] = rng.randint(100, 300)
    row["dst_bytes"] = rng.randint(200, 500)
    return row


@_profile("warezclient")
def _warezclient(rng):
    row = _base(rng)
    row["service"] = "ftp_data"
    row["hot"] = rng.randint(2, 30)
    row["is_guest_login"] = 1
    row["logged_in"] = 1
    row["src_bytes"] = rng.randint(50000, 2000000)
    return row


@_profile("warezmaster")
def _warezmaster(rng):
    row = _base(rng)
    row["service"] = "ftp"
    row["hot"] = rng.randint(10, 30)
    row["is_guest_login"] = 1
    row["logged_in"] = 1
    row["duration"] = rng.randint(5, 60)
    return row


@_profile("imap")
def _imap(rng):
    row = _base(rng)
    row["service"] = "imap4"
    row["flag"] = rng.choice(("SF", "RSTO"))
    row["duration"] = rng.randint(1, 12)
    row["src_bytes"] = rng.randint(1000, 2500)
    return row


@_profile("multihop")
def _multihop(rng):
    row = _base(rng)
    row["service"] = "telnet"
    row["duration"] = rng.randint(20, 120)
    row["hot"] = rng.randint(5, 18)
    row["is_guest_login"] = 1
    row["logged_in"] = 1
    row["dst_bytes"] = rng.randint(2000, 20000)
    return row


@_profile("phf")
def _phf(rng):
    row = _base(rng)
    row["duration"] = rng.randint(1, 5)
    row["src_bytes"] = 51
    row["dst_bytes"] = rng.randint(8000, 9000)
    row["num_access_files"] = 1
    return row


@_profile("snmpguess")
def _snmpguess(rng):
    row = _base(rng)
    row["protocol_type"] = "udp"
    row["service"] = "private"
    row["num_failed_logins"] = rng.randint(1, 4)
    row["src_bytes"] = rng.randint(90, 120)
    row["count"] = rng.randint(10, 60)
    return row


@_profile("snmpgetattack")
def _snmpgetattack(rng):
    row = _base(rng)
    row["protocol_type"] = "udp"
    row["service"] = "private"
    row["is_guest_login"] = 1
    row["src_bytes"] = rng.randint(40, 60)
    row["dst_bytes"] = rng.randint(40, 60)
    row["count"] = rng.randint(5, 30)
    return row


@_profile("httptunnel")
def _httptunnel(rng):
    row = _base(rng)
    row["flag"] = rng.choice(("SF", "S1"))
    row["duration"] = rng.randint(10, 250)
    row["src_bytes"] = rng.randint(5000, 30000)
    row["hot"] = rng.randint(1, 3)
    row["logged_in"] = 1
    return row


@_profile("worm")
def _worm(rng):
    row = _base(rng)
    row["service"] = rng.choice(("http", "http_8001"))
    row["src_bytes"] = rng.randint(250, 400)
    row["count"] = rng.randint(20, 80)
    row["srv_diff_host_rate"] = _rate(rng, 0.5, 1.0)
    row["dst_host_srv_diff_host_rate"] = _rate(rng, 0.5, 1.0)
    return row


def _u2r_base(rng):
    row = _base(rng)
    row["service"] = "telnet"
    row["logged_in"] = 1
    # the shell marker is present often but not always; quiet escalations
    # are only visible through combinations of session features
    row["root_shell"] = 1 if rng.random() < 0.7 else 0
    row["duration"] = rng.randint(5, 300)
    row["src_bytes"] = rng.randint(200, 6000)
    row["dst_bytes"] = rng.randint(500, 10000)
    return row


@_profile("buffer_overflow")
def _buffer_overflow(rng):
    row = _u2r_base(rng)
    row["hot"] = rng.randint(10, 20)
    row["num_root"] = rng.randint(1, 5)
    row["num_file_creations"] = rng.randint(1, 3)
    return row


@_profile("rootkit")
def _rootkit(rng):
    row = _u2r_base(rng)
    row["service"] = rng.choice(("telnet", "ftp"))
    row["num_root"] = rng.randint(2, 10)
    row["num_file_creations"] = rng.randint(2, 6)
    row["num_compromised"] = rng.randint(1, 4)
    return row


@_profile("loadmodule")
def _loadmodule(rng):
    row = _u2r_base(rng)
    row["su_attempted"] = rng.randint(1, 2)
    row["num_file_creations"] = rng.randint(1, 4)
    return row


@_profile("perl")
def _perl(rng):
    row = _u2r_base(rng)
    row["num_shells"] = rng.randint(1, 2)
    row["duration"] = rng.randint(10, 60)
    return row


@_profile("ps")
def _ps(rng):
    row = _u2r_base(rng)
    row["num_file_creations"] = rng.randint(2, 5)
    row["hot"] = rng.randint(3, 8)
    return row


@_profile("xterm")
def _xterm(rng):
    row = _u2r_base(rng)
    row["su_attempted"] = 1
    row["duration"] = rng.randint(50, 150)
    return row


def generate_records(n: int, seed: int = 1) -> list[str]:
    """n corpus lines (43 fields: features, label, difficulty)."""
    rng = random.Random(seed)
    labels = [label for label, _w in MIX]
    weights = [w for _label, w in MIX]
    lines = []
    for _ in range(n):
        label = rng.choices(labels, weights)[0]
        if label == "normal":
            row = _normal(rng)
        else:
            row = _attack_common(rng, _PROFILES[label](rng))
        fields = []
        for name in FEATURE_NAMES:
            v = row[name]
            if isinstance(v, float):
                fields.append(f"{v:.2f}")
            else:
                fields.append(str(v))
        fields.append(label)
        fields.append(str(rng.randint(0, 21)))
        lines.append(",".join(fields))
    return lines


def write_corpus(path, n: int, seed: int = 1) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(generate_records(n, seed)) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="generate a deterministic NSL-KDD-format sample corpus"
    )
    parser.add_argument("out", help="output file path")
    parser.add_argument("--records", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)
    write_corpus(args.out, args.records, args.seed)
    print(f"wrote {args.records} records to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
