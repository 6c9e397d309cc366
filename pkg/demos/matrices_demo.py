"""Print the configuration system for one face-size pair and its check results.

    python3 demos/matrices_demo.py 3 1
"""

import sys

from twoface.system import config_system, run_checks


def main():
    k1, k2 = (int(a) for a in sys.argv[1:3]) if len(sys.argv) > 2 else (3, 1)
    system = config_system(k1, k2)
    print(f"{len(system.cols)} configurations, det M = {system.det}")
    for i, P in enumerate(system.cols):
        print(f"  column {i}: {P.describe()}")
    for name in ("M", "L", "F"):
        print(f"{name} =")
        print(getattr(system, name))
    for check in run_checks(k1, k2)["checks"]:
        print(f"  {check['name']:16s} {'ok' if check['passed'] else 'FAILED'}")


if __name__ == "__main__":
    main()
