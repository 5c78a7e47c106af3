"""Bundled dataset registry: tables plus the dataset descriptions used in prompts.

Offline-friendly datasets (diabetes, iris, synthetic_additive) load from
scikit-learn's packaged data or are generated; california_housing uses
scikit-learn's download cache; the Kaggle datasets (titanic, spaceship_titanic)
load from user-provided CSV paths for license reasons, with schema validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd

from .prompts import DatasetContext

BUNDLED_DATASETS = ("california_housing", "diabetes", "iris", "titanic",
                    "spaceship_titanic", "synthetic_additive")


class DatasetError(ValueError):
    """Unknown dataset name, missing CSV, or a CSV that fails schema validation."""


@dataclass(frozen=True)
class LoadedDataset:
    name: str
    table: pd.DataFrame          # feature columns + target column
    target: str
    link: str                    # "identity" | "logit"
    context: DatasetContext

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(c for c in self.table.columns if c != self.target)


TITANIC_DESCRIPTION = """\
This is the titanic dataset from kaggle. The sinking of the Titanic is one of the most infamous shipwrecks in history.

On April 15, 1912, during her maiden voyage, the widely considered “unsinkable” RMS Titanic sank after colliding with an iceberg. Unfortunately, there weren’t enough lifeboats for everyone onboard, resulting in the death of 1502 out of 2224 passengers and crew.

While there was some element of luck involved in surviving, it seems some groups of people were more likely to survive than others.

This dataset is used to answers the question: “what sorts of people were more likely to survive?” using passenger data (ie name, age, gender, socio-economic class, etc)."""

_DESCRIPTIONS = {
    "california_housing": (
        "This is the California Housing dataset. Each row describes a census "
        "block group from the 1990 California census, with features such as the "
        "median income of the district, the median house age, average numbers of "
        "rooms and bedrooms, population, average occupancy, and the location of "
        "the district. The dataset is used to predict the median house value of "
        "a district, expressed in units of $100,000."),
    "diabetes": (
        "This is the scikit-learn diabetes dataset. Each row describes a diabetes "
        "patient: age, sex, body mass index, average blood pressure, and six "
        "blood serum measurements, all standardized. The dataset is used to "
        "predict a quantitative measure of disease progression one year after "
        "baseline."),
    "iris": (
        "This is the classical Iris dataset. Each row describes an iris flower "
        "by the length and the width of its sepals and petals, measured in "
        "centimeters. The dataset is used here to answer the question: is the "
        "flower an Iris-setosa, or does it belong to another iris species?"),
    "spaceship_titanic": (
        "This is the Spaceship Titanic dataset from kaggle. In the year 2912, "
        "the interstellar passenger liner Spaceship Titanic collided with a "
        "spacetime anomaly while en route to its first destination, and almost "
        "half of the passengers were transported to an alternate dimension. The "
        "dataset contains personal records of the passengers, such as their home "
        "planet, whether they elected cryosleep, their destination, age, VIP "
        "status, and how much they spent on the ship's amenities. It is used to "
        "predict which passengers were transported by the anomaly."),
    "synthetic_additive": (
        "This is a synthetic regression dataset. The features are independent "
        "and uniformly distributed, and the outcome is generated as a sum of "
        "univariate effects of the features plus a small amount of Gaussian "
        "noise, so the true relationship between each feature and the outcome "
        "is exactly additive."),
}

_TARGET_SEMANTICS = {
    "california_housing": "the predicted median house value of the district",
    "diabetes": "the predicted disease progression one year after baseline",
    "iris": "the logprobs to the probability that the flower is Iris-setosa",
    "titanic": "the logprobs to the probability that the passenger survived",
    "spaceship_titanic": ("the logprobs to the probability that the passenger was "
                          "transported to an alternate dimension"),
    "synthetic_additive": "the predicted value of the synthetic outcome",
}

TITANIC_FEATURES = ("Pclass", "Sex", "Age", "SibSp", "Parch", "Fare", "Embarked")
SPACESHIP_FEATURES = ("HomePlanet", "CryoSleep", "Destination", "Age", "VIP",
                      "RoomService", "FoodCourt", "ShoppingMall", "Spa", "VRDeck")


def _context(name: str, description: str | None = None) -> DatasetContext:
    return DatasetContext(description=description or _DESCRIPTIONS[name],
                          target_semantics=_TARGET_SEMANTICS[name])


def _load_california_housing() -> LoadedDataset:
    from sklearn.datasets import fetch_california_housing
    try:
        bunch = fetch_california_housing(as_frame=True)
    except Exception as exc:
        raise DatasetError(
            "california_housing could not be loaded: scikit-learn fetches it "
            f"over the network on first use ({exc})") from None
    table = bunch.frame
    return LoadedDataset("california_housing", table, target="MedHouseVal",
                         link="identity", context=_context("california_housing"))


def _load_diabetes() -> LoadedDataset:
    from sklearn.datasets import load_diabetes
    bunch = load_diabetes(as_frame=True)
    return LoadedDataset("diabetes", bunch.frame, target="target",
                         link="identity", context=_context("diabetes"))


def _load_iris() -> LoadedDataset:
    from sklearn.datasets import load_iris
    bunch = load_iris(as_frame=True)
    table = bunch.frame.rename(columns={
        "sepal length (cm)": "sepal length", "sepal width (cm)": "sepal width",
        "petal length (cm)": "petal length", "petal width (cm)": "petal width",
    })
    # binary target: is the flower an Iris-setosa (class 0)?
    table["is_setosa"] = (table.pop("target") == 0).astype(int)
    return LoadedDataset("iris", table, target="is_setosa", link="logit",
                         context=_context("iris"))


def _read_kaggle_csv(name: str, csv_path: str | Path | None, required: tuple[str, ...],
                     target: str) -> pd.DataFrame:
    if csv_path is None:
        raise DatasetError(f"{name} is loaded from a user-provided CSV "
                           "(Kaggle license); pass csv_path")
    path = Path(csv_path)
    if not path.exists():
        raise DatasetError(f"{name}: no such CSV file {path}")
    try:
        table = pd.read_csv(path)
    except Exception as exc:
        raise DatasetError(f"{name}: malformed CSV {path}: {exc}") from None
    missing = [c for c in required + (target,) if c not in table.columns]
    if missing:
        raise DatasetError(f"{name}: CSV is missing required columns {missing}")
    # missing-value handling beyond clamping is out of scope: drop incomplete rows
    table = table[list(required) + [target]].dropna().reset_index(drop=True)
    if table.empty:
        raise DatasetError(f"{name}: no complete rows after dropping missing values")
    return table


def _coerce_bool_columns(table: pd.DataFrame, columns: tuple[str, ...]) -> pd.DataFrame:
    mapping = {"True": True, "False": False, True: True, False: False}
    for col in columns:
        values = set(table[col].unique())
        if values <= set(mapping):
            table[col] = table[col].map(mapping).astype(bool)
    return table


def _load_titanic(csv_path) -> LoadedDataset:
    table = _read_kaggle_csv("titanic", csv_path, TITANIC_FEATURES, "Survived")
    return LoadedDataset("titanic", table, target="Survived", link="logit",
                         context=_context("titanic", TITANIC_DESCRIPTION))


def _load_spaceship_titanic(csv_path) -> LoadedDataset:
    table = _read_kaggle_csv("spaceship_titanic", csv_path, SPACESHIP_FEATURES,
                             "Transported")
    table = _coerce_bool_columns(table, ("CryoSleep", "VIP", "Transported"))
    return LoadedDataset("spaceship_titanic", table, target="Transported",
                         link="logit", context=_context("spaceship_titanic"))


def synthetic_generating_function(feature: str) -> Callable[[np.ndarray], np.ndarray]:
    """True additive effect of one synthetic feature on the outcome."""
    if feature == "x1":
        return np.sin
    if feature == "x2":
        return lambda x: 0.5 * np.asarray(x)
    return lambda x: np.zeros_like(np.asarray(x, dtype=float))


def _load_synthetic(seed: int, n_rows: int, n_features: int) -> LoadedDataset:
    if n_features < 2:
        raise DatasetError("synthetic_additive needs at least 2 features")
    if n_rows < 20:
        raise DatasetError("synthetic_additive needs at least 20 rows")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3.0, 3.0, size=(n_rows, n_features))
    y = np.sin(x[:, 0]) + 0.5 * x[:, 1] + rng.normal(0.0, 0.1, size=n_rows)
    table = pd.DataFrame({f"x{j + 1}": x[:, j] for j in range(n_features)})
    table["y"] = y
    return LoadedDataset("synthetic_additive", table, target="y", link="identity",
                         context=_context("synthetic_additive"))


def load_bundled_dataset(name: str, csv_path: str | Path | None = None,
                         seed: int = 0, n_rows: int = 2000,
                         n_features: int = 2) -> LoadedDataset:
    """Load a registry dataset with its prompt description.

    ``csv_path`` applies to the Kaggle datasets; ``seed``/``n_rows``/
    ``n_features`` to synthetic_additive (identical seeds regenerate identical
    tables).
    """
    if name == "california_housing":
        return _load_california_housing()
    if name == "diabetes":
        return _load_diabetes()
    if name == "iris":
        return _load_iris()
    if name == "titanic":
        return _load_titanic(csv_path)
    if name == "spaceship_titanic":
        return _load_spaceship_titanic(csv_path)
    if name == "synthetic_additive":
        return _load_synthetic(seed, n_rows, n_features)
    raise DatasetError(f"unknown dataset {name!r}; bundled datasets are "
                       f"{', '.join(BUNDLED_DATASETS)}")
