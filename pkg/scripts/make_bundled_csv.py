"""Regenerate src/dagavg/data/synthetic_26_series.csv.

One fixed draw from a sparse linear Gaussian network: 26 series, 99
rows, edge probability 0.12, unit coefficients scale. Values are
rounded to 6 decimals so the file reads like recorded data.
"""

from pathlib import Path

from dagavg.sampling import SynthConfig, generate_true_dag, sample_data

OUT = Path(__file__).resolve().parents[1] / "src" / "dagavg" / "data" / "synthetic_26_series.csv"


def main():
    a0 = generate_true_dag(SynthConfig(p=26, rho=0.12, coef=0.5, sigma=1.0, seed=2026))
    x = sample_data(a0, 1.0, 99, seed=2027)
    names = [f"s{j + 1:02d}" for j in range(26)]
    lines = [",".join(names)]
    lines += [",".join(f"{v:.6f}" for v in row) for row in x]
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({x.shape[0]} rows, {x.shape[1]} cols)")


if __name__ == "__main__":
    main()
