"""MCP tool handlers for the Langevin toolkit."""
