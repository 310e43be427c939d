from __future__ import annotations

import os
import random

import pytest

from latticegen.network import Cond, Output, Realization, System, SystemNetwork
from latticegen.resources import RObj, ResourceSet, load_resources
from latticegen.suite import Suite

DATA_DIR = os.path.join(
    os.path.dirname(__file__), "..", "src", "latticegen", "data"
)

EN_PATH = os.path.join(DATA_DIR, "toy-en.json")
DE_PATH = os.path.join(DATA_DIR, "toy-de.json")
EN_SUITE_PATH = os.path.join(DATA_DIR, "toy-en.suite.json")
DE_SUITE_PATH = os.path.join(DATA_DIR, "toy-de.suite.json")


@pytest.fixture(scope="session")
def en_resources() -> ResourceSet:
    return load_resources([EN_PATH])


@pytest.fixture(scope="session")
def de_resources() -> ResourceSet:
    return load_resources([DE_PATH])


@pytest.fixture(scope="session")
def en_suite() -> Suite:
    return Suite.load(EN_SUITE_PATH)


@pytest.fixture(scope="session")
def de_suite() -> Suite:
    return Suite.load(DE_SUITE_PATH)


@pytest.fixture(scope="session")
def en_network(en_resources):
    return en_resources.network("en")


# ---------------------------------------------------------------------------
# Random generators shared by property tests


def random_network(rng: random.Random, n_systems: int = 8) -> SystemNetwork:
    """A random acyclic chain-ish network with region tags.

    System i's entry condition references features owned by earlier systems,
    so the result is always a DAG with a single TRUE root.
    """
    regions = [f"R{k}" for k in range(rng.randint(1, 4))]
    systems = []
    features: list[str] = ["root"]
    owners: dict[str, str] = {}
    for i in range(n_systems):
        name = f"S{i}"
        region = rng.choice(regions)
        if i == 0:
            entry = Cond.TRUE
        else:
            refs = rng.sample(features, k=min(len(features), rng.randint(1, 2)))
            conds = [Cond.feature(f) for f in refs]
            if len(conds) == 1:
                entry = conds[0]
            elif rng.random() < 0.5:
                entry = Cond.all_of(*conds)
            else:
                entry = Cond.any_of(*conds)
        outputs = []
        for j in range(rng.randint(1, 3)):
            feat = f"f{i}_{j}"
            reals = []
            if features != ["root"] and rng.random() < 0.3:
                target = rng.choice([f for f in features if f != "root"])
                reals.append(
                    Realization(
                        op="preselect",
                        function=f"Fn{i}{j}",
                        features=(target,),
                        id=f"{name}/{feat}/0",
                    )
                )
            outputs.append(Output(feature=feat, realizations=tuple(reals)))
            owners[feat] = name
        systems.append(
            System(name=name, entry=entry, outputs=tuple(outputs), region=region)
        )
        features.extend(o.feature for o in outputs)
    return SystemNetwork(systems, "root", "xx")


def random_resource_set(rng: random.Random, lang: str, shared_pool: list) -> ResourceSet:
    """A small resource bundle drawing some objects from a shared pool so
    that merges actually unify things."""
    objects = []
    for kind, name, content in rng.sample(shared_pool, k=rng.randint(1, len(shared_pool))):
        objects.append(
            RObj(kind=kind, name=name, content=content, languages=frozenset([lang]))
        )
    for i in range(rng.randint(0, 4)):
        objects.append(
            RObj(
                kind=rng.choice(("system", "lexeme", "chooser", "inquiry")),
                name=f"{lang}-only-{i}",
                content={"name": f"{lang}-only-{i}", "payload": rng.randint(0, 9)},
                languages=frozenset([lang]),
            )
        )
    return ResourceSet(
        languages=frozenset([lang]),
        root_feature="start",
        objects=tuple(objects),
    )


def shared_object_pool(rng: random.Random, size: int = 6) -> list:
    pool = []
    for i in range(size):
        kind = rng.choice(("system", "lexeme", "chooser", "inquiry"))
        name = f"shared-{i}"
        pool.append((kind, name, {"name": name, "payload": rng.randint(0, 99)}))
    return pool
