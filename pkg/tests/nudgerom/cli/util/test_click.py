# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0

import json
import os
from unittest.mock import patch

import click
import pytest

from nudgerom.cli.util.click import ADAPTIVE
from nudgerom.cli.util.click import click_load_config
from nudgerom.cli.util.click import click_load_dns_config
from nudgerom.cli.util.click import click_parse_mu
from nudgerom.cli.util.click import click_parse_mu_list
from nudgerom.cli.util.click import click_parse_r_list
from nudgerom.cli.util.click import click_validate_file_exists
from nudgerom.cli.util.click import ensure_directory_with_permissions
from nudgerom.cli.util.click import parse_mu
from nudgerom.schemas.dns_config_schema import DnsConfigSchema

MODULE_UNDER_TEST = "nudgerom.cli.util.click"

DNS_DOCUMENT = {"grid": {"nx": 16, "ny": 16}, "nu": 0.05, "dt": 0.05, "t_end": 1.0}


def write_json(path, document):
    path.write_text(json.dumps(document) if not isinstance(document, str) else document)
    return str(path)


def test_click_validate_file_exists(tmp_path):
    existing = tmp_path / "exists.bin"
    existing.write_bytes(b"")
    assert click_validate_file_exists(None, None, str(existing)) == str(existing)
    assert click_validate_file_exists(None, None, None) is None
    with pytest.raises(click.BadParameter):
        click_validate_file_exists(None, None, str(tmp_path / "missing.bin"))


@pytest.mark.parametrize(
    "value, expected",
    [("0", 0.0), ("12.5", 12.5), ("adaptive", ADAPTIVE), (" Adaptive ", ADAPTIVE), ("1e3", 1000.0)],
)
def test_parse_mu(value, expected):
    assert parse_mu(value) == expected


@pytest.mark.parametrize("value", ["-1", "nan", "fast", ""])
def test_parse_mu_invalid(value):
    with pytest.raises(ValueError):
        parse_mu(value)
    with pytest.raises(click.BadParameter):
        click_parse_mu(None, None, value)


def test_click_parse_mu_list():
    assert click_parse_mu_list(None, None, "0, 10,100") == [0.0, 10.0, 100.0]
    assert click_parse_mu_list(None, None, None) is None
    for value in ("", "1,x", "5,-1"):
        with pytest.raises(click.BadParameter):
            click_parse_mu_list(None, None, value)


def test_click_parse_r_list():
    assert click_parse_r_list(None, None, "4,6,8") == [4, 6, 8]
    for value in ("4,4", "6,4", "0,2", "2.5"):
        with pytest.raises(click.BadParameter):
            click_parse_r_list(None, None, value)


def test_click_load_dns_config_bare_and_full(tmp_path):
    bare = click_load_dns_config(None, None, write_json(tmp_path / "dns.json", DNS_DOCUMENT))
    assert isinstance(bare, DnsConfigSchema)
    assert bare.dt == 0.05

    full_document = {"dns": DNS_DOCUMENT, "observation": {"cells": 4}, "darom": {"dt": 0.1, "t_end": 0.5}}
    full = click_load_dns_config(None, None, write_json(tmp_path / "full.json", full_document))
    assert full.grid.nx == 16


@pytest.mark.parametrize("document", ["{not json", {"nu": 0.05}, {**DNS_DOCUMENT, "extra": 1}])
def test_click_load_dns_config_errors(tmp_path, document):
    with pytest.raises(click.BadParameter):
        click_load_dns_config(None, None, write_json(tmp_path / "dns.json", document))


def test_click_load_config_errors(tmp_path):
    with pytest.raises(click.BadParameter, match="does not exist"):
        click_load_config(None, None, str(tmp_path / "missing.json"))
    with pytest.raises(click.BadParameter, match="dns"):
        click_load_config(None, None, write_json(tmp_path / "config.json", {"observation": {"cells": 4}}))


def test_ensure_directory_with_permissions(tmp_path):
    target = tmp_path / "a" / "b"
    ensure_directory_with_permissions(str(target))
    assert os.path.isdir(target)
    ensure_directory_with_permissions(str(target))
    ensure_directory_with_permissions(None)


@patch(f"{MODULE_UNDER_TEST}.os.access", return_value=False)
def test_ensure_directory_without_permissions(mock_access, tmp_path):
    with pytest.raises(OSError, match="read/write permissions"):
        ensure_directory_with_permissions(str(tmp_path))
