"""Frontmatter fixtures for configurations and rank tables.

A configuration fixture keeps the sampling parameters in the YAML header and lists one
nonzero coefficient per body line::

    <field> <entry> <x0>,<x1>,<x2>,<x3> theta=[...] dx=[...] v=[...] <re> <im>

Rationals are written as ``p/q``; generator lists are ascending.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction
from typing import Any

import frontmatter  # type: ignore[import-untyped]

from sugra_bv_verifier.errors import ConfigError
from sugra_bv_verifier.exact_scalars import (
    DX_BIT0,
    DX_MASK,
    THETA_MASK,
    V_BIT0,
    V_MASK,
    GaussianRational,
    GrassmannElement,
    generators_mask,
    mask_generators,
)
from sugra_bv_verifier.field_content import BVConfiguration, FieldName, Profile
from sugra_bv_verifier.graded_fiber import Germ, JetField, Target, XExp, iter_terms
from sugra_bv_verifier.structure_maps import RankCertificate

logger = logging.getLogger(__name__)

RANK_COLUMNS = ("map", "domain", "codomain", "domain_dim", "codomain_dim", "rank", "injective", "surjective", "matches")


def _list(values: list[int]) -> str:
    return "[" + ",".join(str(x) for x in values) + "]"


def _parse_list(text: str, prefix: str) -> list[int]:
    if not text.startswith(prefix + "[") or not text.endswith("]"):
        msg = f"Expected {prefix}[...], got '{text}'"
        raise ConfigError(msg)
    inner = text[len(prefix) + 1 : -1]
    return [int(x) for x in inner.split(",")] if inner else []


def dump_configuration(config: BVConfiguration) -> str:
    """Serialise a configuration as a frontmatter document."""
    lines = []
    fields: dict[str, dict[str, Any]] = {}
    for name, value in config.fields.items():
        fields[str(name)] = {"target": str(value.target), "order": value.order}
        for index, x, mask, coefficient in iter_terms(value):
            theta = mask_generators(mask & THETA_MASK)
            forms = [g - DX_BIT0 for g in mask_generators(mask & DX_MASK)]
            frames = [g - V_BIT0 for g in mask_generators(mask & V_MASK)]
            lines.append(
                f"{name} {index} {','.join(str(k) for k in x)} theta={_list(theta)} dx={_list(forms)} "
                f"v={_list(frames)} {coefficient.re} {coefficient.im}"
            )
    post = frontmatter.Post(
        "\n".join(lines),
        odd_generators=config.odd_generators,
        jet_order=config.jet_order,
        seed=config.seed,
        profile=str(config.profile),
        fields=fields,
    )
    return str(frontmatter.dumps(post)) + "\n"


def load_configuration(text: str) -> BVConfiguration:
    """Rebuild a configuration from :func:`dump_configuration` output.

    Raises:
        ConfigError: If the header or a body line is malformed.
    """
    post = frontmatter.loads(text)
    meta = post.metadata
    try:
        fields_meta: dict[str, dict[str, Any]] = meta["fields"]
        jet_order = int(meta["jet_order"])
        odd_generators = int(meta["odd_generators"])
    except (KeyError, TypeError, ValueError) as exc:
        msg = f"Configuration fixture header is incomplete: {exc}"
        raise ConfigError(msg) from exc

    terms: dict[tuple[str, int], dict[XExp, GrassmannElement]] = defaultdict(dict)
    for number, line in enumerate(post.content.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 8:
            msg = f"Line {number}: expected 8 fields, got {len(parts)}"
            raise ConfigError(msg)
        name, index, exps, theta, forms, frames, re, im = parts
        x = tuple(int(k) for k in exps.split(","))
        if len(x) != 4:
            msg = f"Line {number}: derivative index needs four entries"
            raise ConfigError(msg)
        mask = (
            generators_mask(_parse_list(theta, "theta="))
            | generators_mask(g + DX_BIT0 for g in _parse_list(forms, "dx="))
            | generators_mask(g + V_BIT0 for g in _parse_list(frames, "v="))
        )
        coefficient = GaussianRational(Fraction(re), Fraction(im))
        bucket = terms[(name, int(index))]
        current = bucket.get((x[0], x[1], x[2], x[3]), GrassmannElement())
        bucket[(x[0], x[1], x[2], x[3])] = current + GrassmannElement({mask: coefficient})

    fields: dict[FieldName, JetField] = {}
    for name, info in fields_meta.items():
        target = Target(info["target"])
        order = int(info["order"])
        size = len(JetField.zero(target).entries)
        entries = [Germ(terms.get((name, i)), order) for i in range(size)]
        fields[FieldName(name)] = JetField(target, entries)
    seed = meta.get("seed")
    profile = Profile(meta.get("profile", Profile.SPARSE))
    logger.debug("Loaded configuration with %d fields", len(fields))
    return BVConfiguration(fields, jet_order, odd_generators, None if seed is None else int(seed), profile)


def dump_rank_table(rows: list[RankCertificate], seed: int) -> str:
    """Rank certificates as a Markdown table under a frontmatter header."""
    header = "| " + " | ".join(RANK_COLUMNS) + " |"
    rule = "|" + "|".join("---" for _ in RANK_COLUMNS) + "|"
    body = [header, rule]
    for row in rows:
        data = row.to_dict()
        body.append("| " + " | ".join(str(data[c]) for c in RANK_COLUMNS) + " |")
    post = frontmatter.Post("\n".join(body), seed=seed, maps=len(rows))
    return str(frontmatter.dumps(post)) + "\n"


def load_rank_table(text: str) -> tuple[int, list[dict[str, Any]]]:
    """Parse :func:`dump_rank_table` output into the seed and one dict per map."""
    post = frontmatter.loads(text)
    rows: list[dict[str, Any]] = []
    for line in post.content.splitlines()[2:]:
        cells = [c.strip() for c in line.strip().strip("|").split("|")]
        if len(cells) != len(RANK_COLUMNS):
            continue
        row: dict[str, Any] = dict(zip(RANK_COLUMNS, cells, strict=True))
        for key in ("domain_dim", "codomain_dim", "rank"):
            row[key] = int(row[key])
        for key in ("injective", "surjective", "matches"):
            row[key] = row[key] == "True"
        rows.append(row)
    return int(post.metadata["seed"]), rows
