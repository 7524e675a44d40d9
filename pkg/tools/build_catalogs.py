"""Regenerate the bundled catalog files from the genotype table."""

from pathlib import Path

from ssmthom.catalog import dump_catalog
from ssmthom.classification import build_catalog

DATA = Path(__file__).resolve().parent.parent / "src" / "ssmthom" / "data"


def main() -> None:
    for ell in (0, 1, 2):
        path = DATA / f"catalog_l{ell}.json"
        path.write_text(dump_catalog(build_catalog(ell)))
        print(path)


if __name__ == "__main__":
    main()
