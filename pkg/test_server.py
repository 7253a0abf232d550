"""Tests for the MCP tool handlers."""

import json

import pytest

from fnc_polymatroid.formats import load_network
from fnc_polymatroid.server import TOOLS, call_tool, get_prompt, list_prompts, list_tools


def _read(data_dir, name: str):
    return json.loads((data_dir / name).read_text())


async def _call(name: str, arguments: dict):
    result = await call_tool(name, arguments)
    assert len(result) == 1
    return json.loads(result[0].text)


@pytest.fixture
def rep(data_dir):
    return _read(data_dir, "rank3_r4.json")


@pytest.fixture
def network(data_dir):
    return _read(data_dir, "r4_net.json")


async def test_list_tools():
    tools = await list_tools()
    assert [t.name for t in tools] == [t.name for t in TOOLS]
    assert {t.name for t in tools} == {
        "dpm_rank",
        "dpm_bases",
        "dpm_csets",
        "dpm_axioms",
        "net_construct",
        "net_validate",
        "fnc_verify",
        "fnc_rates",
        "fnc_extract",
        "fnc_search",
    }


async def test_usage_prompt():
    prompts = await list_prompts()
    assert [p.name for p in prompts] == ["usage-guide"]
    result = await get_prompt("usage-guide")
    assert "net_construct" in result.messages[0].content.text
    with pytest.raises(ValueError):
        await get_prompt("missing")


async def test_rank_and_csets(rep, data_dir):
    assert await _call("dpm_rank", {"rep": rep, "subset": []}) == {"rank": 0}
    assert await _call("dpm_rank", {"rep": rep, "subset": [1, 2, 3, 4]}) == {"rank": 3}
    assert await _call("dpm_csets", {"rep": rep, "index": 4}) == {"i": 4, "c": [[1, 1, 1, 1]]}
    table = _read(data_dir, "rank3_r4_table.json")
    assert await _call("dpm_bases", {"poly": table}) == _read(data_dir, "golden/bases_r4.json")


async def test_axioms(rep):
    assert (await _call("dpm_axioms", {"rep": rep}))["valid"] is True


async def test_construct(rep, network, data_dir):
    result = await _call("net_construct", {"rep": rep, "basis": [1, 1, 1, 0]})
    assert load_network(result["network"]) == load_network(network)
    assert result["map"] == _read(data_dir, "r4_map.json")["f"]
    assert result["log"] == _read(data_dir, "r4_log.json")["log"]


async def test_construct_select_policy(rep):
    choices = {"choices": [{"i": 2, "u": [0, 1, 1, 2]}]}
    result = await _call(
        "net_construct",
        {"rep": rep, "basis": [1, 1, 1, 0], "policy": "select", "choices": choices},
    )
    assert [d["node"] for d in result["network"]["demands"]] == ["d2_1"]


async def test_validate(network):
    assert await _call("net_validate", {"network": network}) == {"valid": True, "issues": []}


async def test_verify_and_rates(network, data_dir):
    solution = _read(data_dir, "r4_solution.json")
    report = await _call("fnc_verify", {"network": network, "solution": solution})
    assert report == {"verified": True, "failures": []}
    rates = await _call("fnc_rates", {"network": network, "solution": solution})
    assert rates["average"] == "1/2"


async def test_extract(rep, network, data_dir):
    result = await _call(
        "fnc_extract", {"rep": rep, "network": network, "map": _read(data_dir, "r4_map.json")}
    )
    assert result == _read(data_dir, "r4_solution.json")


async def test_search(network):
    result = await _call("fnc_search", {"network": network, "k": [1, 1, 1], "n": 1})
    assert result["verdict"] == "exhausted-none"
    assert result["linear"] is True
    assert result["solution"] is None

    result = await _call("fnc_search", {"network": network, "k": [2, 2, 2], "n": 3, "budget": 10})
    assert result["verdict"] == "budget-exceeded"


async def test_errors_are_reported(rep, network):
    result = await _call("dpm_rank", {"subset": [1]})
    assert result["tool"] == "dpm_rank"
    assert "rep" in result["error"]

    result = await _call("net_construct", {"rep": rep, "basis": [0, 1, 1, 1]})
    assert result["tool"] == "net_construct"

    broken = dict(network, weights={})
    result = await _call("net_validate", {"network": broken})
    assert "weights" in result["error"]


async def test_unknown_tool():
    assert await _call("nope", {}) == {"error": "Unknown tool: nope"}


async def test_cset_description_states_the_definition():
    tools = {t.name: t for t in await list_tools()}
    text = tools["dpm_csets"].description
    assert "u - e_i" in text
    assert "maximum" not in text
