"""Regenerate the JSON fixtures in this directory: ``python3 make_fixtures.py``."""

import os

from favres import serialize as ser
from favres.cli import RunConfig, cmd_koszul
from favres.pseudo_rep import cyclic_group, standard_rep_s3, symmetric_group

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, obj):
    with open(os.path.join(HERE, name), "w", encoding="utf-8") as fh:
        fh.write(ser.dumps(obj))


def main():
    # stratum bracket: (p, m) = (3, 1), ideal generator x1^2, n2 = n3 = 2
    write("stratum_g3.json", cmd_koszul(RunConfig(p=3, g=3, m=1), "stratum", (1, 1, 1), 1, (2, 0, 0), (2, 2)))
    # lower bracket: (p, m) = (2, 1), m1 = m2 = 2, N = 2
    write("lower_g3.json", cmd_koszul(RunConfig(p=2, g=3, m=1), "lower", (1, 1, 1), 1, (2, 2, 0), (2,)))
    # the stratum shape over Z/9 with the augmentation coefficient 1 turned into 3
    bad = cmd_koszul(RunConfig(p=3, g=3, m=2), "stratum", (1, 1, 1), 1, (6, 0, 0), (6, 6))
    bad["augmentation"][0]["alpha"] = 3
    write("corrupted_stratum_g3.json", bad)
    s3 = symmetric_group(3)
    write("s3.json", ser.group_to_dict(s3))
    write("z2.json", ser.group_to_dict(cyclic_group(2)))
    mats = standard_rep_s3(s3)
    write("s3_std2.json", {"p": 5, "m": 1, "matrices": {e: M for e, M in zip(s3.elements, mats)}})
    tr = {e: (M[0][0] + M[1][1]) % 5 for e, M in zip(s3.elements, mats)}
    write("tau_s3_std2.json", {"p": 5, "m": 1, "d": 2, "values": tr})
    broken = dict(tr)
    broken["(1 2)"] = (broken["(1 2)"] + 1) % 5
    write("tau_s3_noncentral.json", {"p": 5, "m": 1, "d": 2, "values": broken})


if __name__ == "__main__":
    main()
