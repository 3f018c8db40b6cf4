"""End-to-end smoke tests for the compiled extension module."""

import json
import math

import pytest

import wordgraph


def test_version_is_a_dotted_string():
    parts = wordgraph.__version__.split(".")
    assert len(parts) == 3
    assert all(p.isdigit() for p in parts)


def test_cosine_similarity_basics():
    assert wordgraph.cosine_similarity([1.0, 0.0], [1.0, 0.0]) == 1.0
    assert wordgraph.cosine_similarity([1.0, 0.0], [-1.0, 0.0]) == -1.0
    assert wordgraph.cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0
    value = wordgraph.cosine_similarity([1.0, 1.0], [1.0, 0.0])
    assert value == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)


def test_cosine_similarity_rejects_degenerate_input():
    with pytest.raises(wordgraph.DomainError):
        wordgraph.cosine_similarity([1.0, 0.0], [1.0])
    with pytest.raises(wordgraph.DomainError):
        wordgraph.cosine_similarity([0.0, 0.0], [1.0, 0.0])


def test_adjusted_rand_index_extremes():
    assert wordgraph.adjusted_rand_index([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert wordgraph.adjusted_rand_index([0, 0, 1, 1], [0, 0, 1, 1]) == 1.0
    with pytest.raises(wordgraph.DomainError):
        wordgraph.adjusted_rand_index([0, 1], [0, 1, 2])


def test_pipeline_round_trip(tmp_path):
    data = wordgraph.gen_synthetic(
        clusters=3,
        words_per_cluster=20,
        dim=16,
        noise=0.05,
        seed=7,
        out_dir=str(tmp_path / "data"),
    )
    result = wordgraph.pipeline(
        vectors=data["vectors"],
        out_dir=str(tmp_path / "run"),
        k=5,
        floor=0.4,
    )

    assert result["community_count"] == 3
    assert result["modularity"] > 0.5

    with open(result["manifest"], encoding="utf-8") as handle:
        manifest = json.load(handle)
    assert manifest["tool"]["name"] == "wordgraph"
    assert len(manifest["artifacts"]) == 7

    with open(result["seed_report"], encoding="utf-8") as handle:
        report = json.load(handle)
    assert len(report["communities"]) == 3
    for community in report["communities"]:
        assert community["seeds"], "every community reports at least one seed"
        scores = [seed["score"] for seed in community["seeds"]]
        assert scores == sorted(scores, reverse=True)

    # Recovered communities match the planted labels exactly at this noise.
    planted = {}
    with open(data["labels"], encoding="utf-8") as handle:
        for line in handle:
            word, label = line.rstrip("\n").split("\t")
            planted[word] = int(label)
    found = {}
    with open(result["partition"], encoding="utf-8") as handle:
        for line in handle:
            word, community = line.rstrip("\n").split("\t")
            found[word] = int(community)
    assert set(found) == set(planted)
    words = sorted(found)
    ari = wordgraph.adjusted_rand_index(
        [planted[w] for w in words], [found[w] for w in words]
    )
    assert ari == 1.0


def test_staged_calls_chain_through_files(tmp_path):
    data = wordgraph.gen_synthetic(
        clusters=2,
        words_per_cluster=10,
        dim=8,
        noise=0.1,
        seed=3,
        out_dir=str(tmp_path / "data"),
    )
    build = wordgraph.build_graph(
        vectors=data["vectors"], out_dir=str(tmp_path / "run"), k=4, floor=0.3
    )
    assert build["nodes"] == 20
    comm = wordgraph.communities(edges=build["edges"], out_dir=str(tmp_path / "run"))
    assert comm["community_count"] >= 2
    report_path = wordgraph.seeds(
        edges=build["edges"],
        partition=comm["partition"],
        out_dir=str(tmp_path / "run"),
        top_r=3,
    )
    with open(report_path, encoding="utf-8") as handle:
        report = json.load(handle)
    assert report["schema_version"] == 1


def test_errors_surface_with_distinct_types(tmp_path):
    with pytest.raises(wordgraph.IoError):
        wordgraph.build_graph(
            vectors=str(tmp_path / "absent.txt"), out_dir=str(tmp_path / "run")
        )
    bad = tmp_path / "bad.txt"
    bad.write_text("not a vectors file\n", encoding="utf-8")
    with pytest.raises(wordgraph.ParseError):
        wordgraph.build_graph(vectors=str(bad), out_dir=str(tmp_path / "run"))
    with pytest.raises(wordgraph.ConfigError):
        wordgraph.pipeline(
            vectors=str(bad), out_dir=str(tmp_path / "run"), floor=1.5
        )
