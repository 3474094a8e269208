import asyncio
import json
import logging
import os

import mcp.server.stdio
import mcp.types as types
from mcp.server import Server

from src.lib.error_handler import LangevinToolkitError, setup_logging
from src.lib.target_loader import DEFAULT_PRESET_DIR
from src.mcp.handlers.inference_handler import InferenceHandler
from src.mcp.handlers.sampling_handler import SamplingHandler
from src.mcp.handlers.theory_handler import TheoryHandler
from src.mcp.tools.tool_registry import TOOLS


def build_server(preset_dir: str) -> Server:
    logger = logging.getLogger(__name__)
    sampling_handler = SamplingHandler(preset_dir)
    theory_handler = TheoryHandler(preset_dir)
    inference_handler = InferenceHandler()
    dispatch = {
        "sample_chain": sampling_handler.sample_chain,
        "plan_sampling": theory_handler.plan_sampling,
        "ergodicity_bounds": theory_handler.ergodicity_bounds,
        "gamma_interval": theory_handler.gamma_interval,
        "projection_interval": inference_handler.projection_interval,
    }

    server = Server("precond-lmc")

    @server.list_tools()
    async def list_tools() -> list[types.Tool]:
        return [
            types.Tool(name=name, description=tool["description"], inputSchema=tool["input_schema"])
            for name, tool in TOOLS.items()
        ]

    @server.call_tool()
    async def call_tool(name: str, arguments: dict) -> list[types.TextContent]:
        if name not in dispatch:
            raise LangevinToolkitError(f"Unknown tool: {name}")
        try:
            logger.info(f"Calling {name}")
            result = await dispatch[name](**(arguments or {}))
        except LangevinToolkitError as e:
            logger.error(f"Error in {name}: {e.message}")
            raise
        except Exception as e:
            logger.error(f"Error in {name}: {str(e)}")
            raise LangevinToolkitError(f"{name} failed: {str(e)}")
        return [types.TextContent(type="text", text=json.dumps(result))]

    return server


async def main():
    setup_logging()
    logger = logging.getLogger(__name__)
    preset_dir = os.environ.get("LMC_PRESET_DIR", DEFAULT_PRESET_DIR)
    logger.info(f"Starting precond-lmc MCP server (presets from {preset_dir})")
    server = build_server(preset_dir)
    async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, server.create_initialization_options())


if __name__ == "__main__":
    asyncio.run(main())
