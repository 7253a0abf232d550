"""
FNC Polymatroid MCP Server

Exposes the polymatroid, construction and network-coding operations as MCP
tools. Every tool takes its objects inline, in the same JSON shapes the
command-line files use.
"""

import asyncio
import json
import logging
import sys
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from .bridge import extract_solution
from .codec import rates, verify_solution
from .config import get_config
from .constructor import POLICIES, build_network
from .formats import (
    load_choices,
    load_map,
    load_network,
    load_rank_oracle,
    load_representation,
    load_solution,
    log_to_dict,
)
from .polymatroid import Representation, polymatroid_of
from .solver import search_linear

logger = logging.getLogger("fnc-polymatroid")


# ==================== Usage Guide ====================

USAGE_GUIDE = """
# FNC Polymatroid - Usage

Objects are passed inline as JSON.

- Representation: {"q": 2, "ambient": 3, "generators": [[[1],[0],[0]], ...]}
  (generator i is a list of rows, ambient rows each)
- Rank table: {"r": 3, "rank": {"0": 0, "1": 1, ...}} keyed by subset bitmask
- Network: {"nodes": [...], "inputs": [{"id","at","msg","k"}],
  "edges": [{"id","from","to"}], "demands": [{"node","msgs"}]}
- Solution: {"q", "k", "n", "global": {edge id: rows}}

## Typical flow
1. `dpm_bases` on a representation, pick a basis vector b
2. `net_construct` with that b to get a network and its map
3. `fnc_extract` with the representation, network and map
4. `fnc_verify` / `fnc_rates` on the result
5. `fnc_search` for a bounded linear search over a chosen (k; n)
"""


# ==================== Server Setup ====================

app = Server("fnc-polymatroid")


def _oracle(args: dict[str, Any]):
    if "rep" in args:
        return load_rank_oracle(args["rep"])
    if "poly" in args:
        return load_rank_oracle(args["poly"])
    raise ValueError("pass either 'rep' or 'poly'")


def _polymatroid(args: dict[str, Any]):
    oracle = _oracle(args)
    if isinstance(oracle, Representation):
        return polymatroid_of(oracle)
    return oracle


ORACLE_PROPS = {
    "rep": {"type": "object", "description": "Representation (q, ambient, generators)"},
    "poly": {"type": "object", "description": "Rank table (r, rank)"},
}


# ==================== Tool Definitions ====================

TOOLS = [
    Tool(
        name="dpm_rank",
        description="Rank of a subset of the ground set (1-based elements).",
        inputSchema={
            "type": "object",
            "properties": {
                **ORACLE_PROPS,
                "subset": {"type": "array", "items": {"type": "integer"}},
            },
            "required": ["subset"],
        },
    ),
    Tool(
        name="dpm_bases",
        description="Basis vectors in lexicographic order, the rank and rho_max.",
        inputSchema={"type": "object", "properties": ORACLE_PROPS},
    ),
    Tool(
        name="dpm_csets",
        description="""C-sets. C_i holds the excluded vectors u with u_i = 1 such that u - e_i is a
member, no other such vector lies below u, and none has a support strictly inside
u's support. Omit index to get all of them.""",
        inputSchema={
            "type": "object",
            "properties": {**ORACLE_PROPS, "index": {"type": "integer"}},
        },
    ),
    Tool(
        name="dpm_axioms",
        description="Check normalisation, monotonicity and submodularity of the rank function.",
        inputSchema={"type": "object", "properties": ORACLE_PROPS},
    ),
    Tool(
        name="net_construct",
        description="""Build a network from a discrete polymatroid and an eligible basis vector.

Returns the network, the edge-to-element map and the construction log.""",
        inputSchema={
            "type": "object",
            "properties": {
                **ORACLE_PROPS,
                "basis": {"type": "array", "items": {"type": "integer"}},
                "policy": {"type": "string", "enum": list(POLICIES)},
                "choices": {
                    "type": "object",
                    "description": "{\"choices\": [{\"i\", \"u\"}]} for the select policy",
                },
            },
            "required": ["basis"],
        },
    ),
    Tool(
        name="net_validate",
        description="Check a network for structural problems (unknown nodes, cycles, ...).",
        inputSchema={
            "type": "object",
            "properties": {"network": {"type": "object"}},
            "required": ["network"],
        },
    ),
    Tool(
        name="fnc_verify",
        description="Verify a fractional linear solution: source, decoding and local conditions.",
        inputSchema={
            "type": "object",
            "properties": {
                "network": {"type": "object"},
                "solution": {"type": "object"},
                "witnesses": {"type": "boolean", "default": False},
            },
            "required": ["network", "solution"],
        },
    ),
    Tool(
        name="fnc_rates",
        description="Per-message, average and symmetric rates of a verified solution.",
        inputSchema={
            "type": "object",
            "properties": {"network": {"type": "object"}, "solution": {"type": "object"}},
            "required": ["network", "solution"],
        },
    ),
    Tool(
        name="fnc_extract",
        description="Read a verified solution off a representation and an edge-to-element map.",
        inputSchema={
            "type": "object",
            "properties": {
                "rep": {"type": "object"},
                "network": {"type": "object"},
                "map": {"type": "object", "description": "{\"f\": {edge id: element}}"},
                "edge_dim": {"type": "integer"},
            },
            "required": ["rep", "network", "map"],
        },
    ),
    Tool(
        name="fnc_search",
        description="""Bounded search for a linear (k; n) solution over F_q.

The verdict is Found, ExhaustedNone or BudgetExceeded and always concerns
linear codes only.""",
        inputSchema={
            "type": "object",
            "properties": {
                "network": {"type": "object"},
                "k": {"type": "array", "items": {"type": "integer"}},
                "n": {"type": "integer"},
                "q": {"type": "integer", "default": 2},
                "budget": {"type": "integer"},
            },
            "required": ["network", "k", "n"],
        },
    ),
]


# ==================== MCP Prompts ====================


@app.list_prompts()
async def list_prompts():
    """List available prompts."""
    from mcp.types import Prompt

    return [
        Prompt(
            name="usage-guide",
            description="How to pass objects to the FNC Polymatroid tools",
        )
    ]


@app.get_prompt()
async def get_prompt(name: str, arguments: dict[str, str] | None = None):
    """Get a specific prompt by name."""
    from mcp.types import GetPromptResult, PromptMessage
    from mcp.types import TextContent as PromptTextContent

    if name == "usage-guide":
        return GetPromptResult(
            description="FNC Polymatroid usage guide",
            messages=[
                PromptMessage(
                    role="user",
                    content=PromptTextContent(type="text", text=USAGE_GUIDE.strip()),
                )
            ],
        )

    raise ValueError(f"Prompt not found: {name}")


# ==================== Tool Handling ====================


@app.list_tools()
async def list_tools() -> list[Tool]:
    """List all available tools."""
    return TOOLS


@app.call_tool()
async def call_tool(name: str, arguments: dict[str, Any]) -> list[TextContent]:
    """Handle tool calls."""
    try:
        result = await _handle_tool(name, arguments or {})
        return [TextContent(type="text", text=json.dumps(result, indent=2, default=str))]
    except Exception as e:
        logger.exception(f"Error handling tool {name}")
        return [
            TextContent(
                type="text",
                text=json.dumps({"error": str(e), "tool": name}, indent=2),
            )
        ]


async def _handle_tool(name: str, args: dict[str, Any]) -> dict[str, Any]:
    """Handle individual tool calls."""

    # Polymatroid tools
    if name == "dpm_rank":
        return {"rank": _oracle(args).rank_of_set(args["subset"])}

    elif name == "dpm_bases":
        d = _polymatroid(args)
        return {
            "bases": [list(b) for b in d.bases()],
            "rank": d.rank_of(),
            "rho_max": d.rho_max(),
        }

    elif name == "dpm_csets":
        d = _polymatroid(args)
        index = args.get("index")
        indices = [index] if index is not None else list(range(1, d.r + 1))
        rows = [{"i": i, "c": [list(u) for u in d.c_set(i)]} for i in indices]
        return rows[0] if index is not None else {"csets": rows}

    elif name == "dpm_axioms":
        return _polymatroid(args).validate_axioms().to_dict()

    # Network tools
    elif name == "net_construct":
        d = _polymatroid(args)
        choices = load_choices(args["choices"]) if "choices" in args else None
        net, f, state = build_network(
            d, args["basis"], policy=args.get("policy"), choices=choices
        )
        return {
            "network": net.to_dict(),
            "map": f.to_dict()["f"],
            "log": log_to_dict(state.log)["log"],
        }

    elif name == "net_validate":
        return load_network(args["network"]).validate().to_dict()

    # Solution tools
    elif name == "fnc_verify":
        report = verify_solution(load_network(args["network"]), load_solution(args["solution"]))
        return report.to_dict(witnesses=bool(args.get("witnesses", False)))

    elif name == "fnc_rates":
        return rates(load_network(args["network"]), load_solution(args["solution"])).to_dict()

    elif name == "fnc_extract":
        sol = extract_solution(
            load_network(args["network"]),
            load_representation(args["rep"]),
            load_map(args["map"]),
            n=args.get("edge_dim"),
        )
        return sol.to_dict()

    elif name == "fnc_search":
        net = load_network(args["network"])
        outcome = await asyncio.to_thread(
            search_linear,
            net,
            args["k"],
            args["n"],
            args.get("q", 2),
            budget=args.get("budget"),
            jobs=1,
        )
        return outcome.to_dict()

    else:
        return {"error": f"Unknown tool: {name}"}


# ==================== Entry Point ====================


def _configure_logging() -> None:
    config = get_config().server
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file, encoding="utf-8"))
    logging.basicConfig(
        level=logging.DEBUG if config.debug else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )


async def run_server():
    """Run the MCP server."""
    logger.info("Starting FNC Polymatroid Server...")

    async with stdio_server() as (read_stream, write_stream):
        await app.run(
            read_stream,
            write_stream,
            app.create_initialization_options(),
        )


def main():
    """Main entry point."""
    _configure_logging()
    try:
        asyncio.run(run_server())
    except KeyboardInterrupt:
        logger.info("Server stopped by user")
    except Exception as e:
        logger.exception(f"Server error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
