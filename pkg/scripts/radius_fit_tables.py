"""Chi-squared fits of the two measured radius histograms (VV at 0 m and
VH at 10 m) against uniform and normal models, with dof 4 and bins - 1."""

from anchorloc.antenna import RadiusModel
from anchorloc.stats import Histogram, chi2_test

HISTOGRAMS = {
    "VV h=0": (Histogram((32.14, 58.34, 84.54, 110.74, 136.94, 163.14), (8, 7, 8, 5, 10)), 97.10, 39.74),
    "VH h=10": (Histogram((16.52, 41.52, 66.52, 91.52, 141.52), (5, 9, 11, 3)), 66.34, 22.81),
}


def main():
    for name, (h, mu, sigma) in HISTOGRAMS.items():
        for model in (RadiusModel.uniform(mu, sigma), RadiusModel.normal(mu, sigma)):
            for dof in sorted({4, len(h.counts) - 1}):
                r = chi2_test(h, model, dof)
                contrib = " ".join(f"{c:5.2f}" for c in r.per_bin_contrib)
                print(f"{name:<8} {model.kind.value:<8} dof={dof}  contrib [{contrib}]  chi2={r.chi2:6.2f}  p={r.p_value:.3f}")


if __name__ == "__main__":
    main()
