"""Tests for source discovery, parsing and site extraction."""

import itertools
import random
from typing import Dict, List, Tuple

import pytest

from core.errors import NotADirectory, ParseError, PathNotFound
from core.models import SiteKind, SourceFile
from tests.java_oracle import count_sites
from tools.source_model_tool import (
    SourceModelTool,
    build_scope_tree,
    discover_sources,
    find_injection_sites,
    find_lifecycle_pairs,
    model_project,
    parse_unit,
)


def _unit(text: str, relative_path: str = "Sample.java"):
    return parse_unit(SourceFile(file_id=0, relative_path=relative_path, content=text.encode("utf-8")))


def _counts(sites) -> Dict[str, int]:
    return {
        "classes": sum(1 for site in sites if site.kind == SiteKind.CLASS_BODY),
        "methods": sum(1 for site in sites if site.kind == SiteKind.METHOD_BODY),
        "anon_methods": sum(1 for site in sites if site.kind == SiteKind.ANON_METHOD_BODY),
    }


# =============================================================================
# Random class files
# =============================================================================


def _random_class(rng: random.Random, name: str, depth: int, counts: Dict[str, int],
                  lines: List[str], indent: str) -> None:
    counts["classes"] += 1
    abstract = rng.random() < 0.25
    lines.append(f"{indent}{'abstract ' if abstract else ''}class {name} {{")
    inner = indent + "    "

    for field in range(rng.randint(0, 2)):
        lines.append(f"{inner}int f{field} = {field};")
    if rng.random() < 0.2:
        counts["anon_methods"] += 1
        lines.append(f"{inner}Runnable task = new Runnable() {{")
        lines.append(f"{inner}    public void run() {{ int y = 1; }}")
        lines.append(f"{inner}}};")
    if rng.random() < 0.3:
        counts["methods"] += 1
        lines.append(f"{inner}{name}(int seed) {{ f(seed); }}")

    for method in range(rng.randint(0, 3)):
        if abstract and rng.random() < 0.5:
            lines.append(f"{inner}abstract void a{method}(int x);")
            continue
        counts["methods"] += 1
        lines.append(f"{inner}void m{method}(int x) {{")
        if rng.random() < 0.4:
            counts["anon_methods"] += 1
            lines.append(f"{inner}    Runnable r = new Runnable() {{")
            lines.append(f"{inner}        @Override")
            lines.append(f"{inner}        public void run() {{ int y = 2; }}")
            lines.append(f"{inner}    }};")
        if rng.random() < 0.4:
            lines.append(f"{inner}    if (x > 0) {{ x--; }} else {{ x++; }}")
        if rng.random() < 0.2:
            lines.append(f"{inner}    for (int i = 0; i < x; i++) {{ x += i; }}")
        lines.append(f"{inner}}}")

    if rng.random() < 0.2:
        lines.append(f"{inner}interface Hook{name} {{ void hook(); default int level() {{ return 1; }} }}")
    if depth < 2:
        for child in range(rng.choice([0, 0, 1, 2])):
            _random_class(rng, f"{name}N{child}", depth + 1, counts, lines, inner)
    lines.append(f"{indent}}}")


def random_java_file(seed: int) -> Tuple[str, Dict[str, int]]:
    rng = random.Random(seed)
    counts = {"classes": 0, "methods": 0, "anon_methods": 0}
    lines = ["package sample;", ""]
    _random_class(rng, f"C{seed}", 0, counts, lines, "")
    if rng.random() < 0.3:
        lines.extend(["", "interface Extra {", "    void extra();", "}"])
    return "\n".join(lines) + "\n", counts


# =============================================================================
# Fixture project
# =============================================================================


class TestFixtureSites:

    def test_total_matches_manifest(self, fixture_model, manifest) -> None:
        assert len(fixture_model.sites) == manifest.total_sites == 23

    def test_per_file_counts(self, fixture_model, manifest) -> None:
        for entry in manifest.files:
            sites = [site for site in fixture_model.sites if site.relative_path == entry.relative_path]
            assert _counts(sites) == {
                "classes": entry.classes, "methods": entry.methods, "anon_methods": entry.anon_methods,
            }, entry.relative_path

    def test_token_oracle_agrees(self, fixture_sources, manifest) -> None:
        for source in fixture_sources:
            entry = manifest.file(source.relative_path)
            assert count_sites(source.content.decode("utf-8")) == {
                "classes": entry.classes, "methods": entry.methods, "anon_methods": entry.anon_methods,
            }, source.relative_path

    def test_interface_contributes_nothing(self, fixture_model) -> None:
        assert not [site for site in fixture_model.sites if site.relative_path.endswith("Recorder.java")]

    def test_sites_follow_opening_braces(self, fixture_model, fixture_sources) -> None:
        contents = {source.file_id: source.content for source in fixture_sources}
        for site in fixture_model.sites:
            assert contents[site.file_id][site.insertion_offset - 1:site.insertion_offset] == b"{"

    def test_sites_are_ordered(self, fixture_model) -> None:
        keys = [(site.file_id, site.insertion_offset) for site in fixture_model.sites]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)

    def test_anonymous_method(self, fixture_model) -> None:
        anon = [site for site in fixture_model.sites if site.kind == SiteKind.ANON_METHOD_BODY]
        assert len(anon) == 1
        assert anon[0].class_path == ("ReminderScheduler", "anon$1")
        assert anon[0].method_name == "run"

    def test_nested_class_path(self, fixture_model) -> None:
        site = next(site for site in fixture_model.sites if site.method_name == "childMethodA")
        assert site.class_path == ("ParentClass", "ChildClass")
        assert site.location_name == "childMethodA"

    def test_constructor_is_a_method_site(self, fixture_model) -> None:
        names = [site.method_name for site in fixture_model.sites if site.relative_path.endswith("HistoryStore.java")]
        assert names == [None, "HistoryStore", "add", "size"]


class TestScopesAndLifecycle:

    def test_scope_tree_parents(self, fixture_model) -> None:
        tree = fixture_model.scope_tree
        by_path = {node.class_path: node for node in tree.nodes}

        child = by_path[("ParentClass", "ChildClass")]
        assert [node.name for node in tree.ancestors(child)] == ["ParentClass"]
        rule = by_path[("Formatter", "Rule")]
        assert [node.name for node in tree.ancestors(rule)] == ["Formatter"]
        assert len(tree.roots()) == 6

    def test_nested_method_count(self, fixture_model, manifest) -> None:
        tree = fixture_model.scope_tree
        nested = sum(len(node.method_sites) for node in tree.nodes if node.parent is not None)
        assert nested == manifest.nested_class_methods

    def test_lifecycle_pairs(self, fixture_model, manifest) -> None:
        pairs = [(p.earlier_method.method_name, p.later_method.method_name) for p in fixture_model.lifecycle_pairs]
        assert pairs == [("onCreate", "onStart"), ("onCreate", "onResume"), ("onStart", "onResume")]
        assert len(pairs) == manifest.lifecycle_pairs

    def test_lifecycle_pairs_match_brute_force(self) -> None:
        text = """
class Screen {
    void onResume() { }
    void onCreate() { }
    void helper() { }
    void onStop() { }
}
"""
        order = ["onCreate", "onStart", "onResume", "onPause", "onStop", "onDestroy"]
        pairs = find_lifecycle_pairs(_unit(text), 0, order)
        callbacks = ["onResume", "onCreate", "onStop"]
        expected = {(a, b) for a, b in itertools.permutations(callbacks, 2) if order.index(a) < order.index(b)}
        assert {(p.earlier_method.method_name, p.later_method.method_name) for p in pairs} == expected
        assert all(p.earlier_rank < p.later_rank for p in pairs)

    def test_custom_lifecycle_order(self) -> None:
        text = "class Worker { void stop() { } void start() { } }"
        pairs = find_lifecycle_pairs(_unit(text), 0, ["start", "stop"])
        assert [(p.earlier_method.method_name, p.later_method.method_name) for p in pairs] == [("start", "stop")]


class TestSiteExtraction:

    def test_enum_body_is_skipped_but_nested_class_is_not(self) -> None:
        text = """
enum Mode {
    ON, OFF;
    int weight() { return 1; }
    static class Helper {
        void help() { }
    }
}
"""
        sites = find_injection_sites(_unit(text), 0)
        assert [(site.kind, site.class_path, site.method_name) for site in sites] == [
            (SiteKind.CLASS_BODY, ("Mode", "Helper"), None),
            (SiteKind.METHOD_BODY, ("Mode", "Helper"), "help"),
        ]

    def test_abstract_and_interface_methods_have_no_sites(self) -> None:
        text = "abstract class Shape { abstract double area(); }\ninterface Named { default String name() { return \"\"; } }"
        sites = find_injection_sites(_unit(text), 0)
        assert [site.kind for site in sites] == [SiteKind.CLASS_BODY]

    def test_anonymous_classes_are_numbered_per_file(self) -> None:
        text = """
class Host {
    Runnable a = new Runnable() { public void run() { } };
    void go() {
        Runnable b = new Runnable() { public void run() { } };
    }
}
"""
        anon = [s for s in find_injection_sites(_unit(text), 0) if s.kind == SiteKind.ANON_METHOD_BODY]
        assert [s.class_path for s in anon] == [("Host", "anon$1"), ("Host", "anon$2")]

    def test_scope_tree_of_deep_nesting(self) -> None:
        text = "class A { void a() { } class B { class C { void c() { } } } }"
        tree = build_scope_tree(_unit(text), 0)
        c = next(node for node in tree.nodes if node.name == "C")
        assert [node.name for node in tree.ancestors(c)] == ["B", "A"]

    @pytest.mark.parametrize("seed", range(200))
    def test_site_formula_on_random_files(self, seed) -> None:
        """Sites equal classes plus methods plus anonymous-class methods."""
        text, expected = random_java_file(seed)
        sites = find_injection_sites(_unit(text, f"sample/C{seed}.java"), 0)

        assert _counts(sites) == expected
        assert len(sites) == sum(expected.values())
        assert count_sites(text) == expected


class TestDiscoveryAndParsing:

    def test_discovery_order_and_skipped_directories(self, tmp_path) -> None:
        for relative in ["b/B.java", "a/A.java", "build/Gen.java", "a/notes.txt", "Z.java"]:
            path = tmp_path / relative
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("class X { }\n", encoding="utf-8")

        sources = discover_sources(tmp_path)
        assert [source.relative_path for source in sources] == ["Z.java", "a/A.java", "b/B.java"]
        assert [source.file_id for source in sources] == [0, 1, 2]

    def test_missing_root(self, tmp_path) -> None:
        with pytest.raises(PathNotFound) as excinfo:
            discover_sources(tmp_path / "absent")
        assert "appSrc not found" in str(excinfo.value)

    def test_root_is_a_file(self, tmp_path) -> None:
        path = tmp_path / "A.java"
        path.write_text("class A { }", encoding="utf-8")
        with pytest.raises(NotADirectory):
            discover_sources(path)

    def test_syntax_error(self) -> None:
        with pytest.raises(ParseError) as excinfo:
            _unit("class Broken { void f( { }", "Broken.java")
        assert excinfo.value.file == "Broken.java"

    def test_unparseable_files_are_excluded(self) -> None:
        sources = [
            SourceFile(file_id=0, relative_path="Good.java", content=b"class Good { void g() { } }"),
            SourceFile(file_id=1, relative_path="Bad.java", content=b"class Bad { void b( }"),
        ]
        model = model_project(sources)
        assert {site.relative_path for site in model.sites} == {"Good.java"}
        assert [failure.relative_path for failure in model.parse_failures] == ["Bad.java"]

    def test_tool_reports_missing_root(self, tmp_path) -> None:
        result = SourceModelTool()._run(str(tmp_path / "absent"))
        assert result["success"] is False
        assert result["error_type"] == "PathNotFound"
        assert result["exit_code"] == 1
