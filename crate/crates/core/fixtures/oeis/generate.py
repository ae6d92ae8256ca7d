"""Regenerates the offline b-file fixtures.

The sandbox that produced them had no route to oeis.org, so the data is
computed with Python integers rather than downloaded. The format matches
the public b-files: '#' comments, then 'index value' lines.
"""

from pathlib import Path

HERE = Path(__file__).parent
N = 1000


def write(number, title, values):
    lines = [f"# A{number} {title}", "# Generated locally for offline tests; n = 0..%d" % N]
    lines += [f"{n} {v}" for n, v in enumerate(values)]
    (HERE / f"b{number}.txt").write_text("\n".join(lines) + "\n")


write("000079", "Powers of 2: a(n) = 2^n.", (2**n for n in range(N + 1)))
write("001370", "Sum of digits of 2^n.", (sum(map(int, str(2**n))) for n in range(N + 1)))
