"""Tool schemas for the Langevin toolkit MCP server."""
