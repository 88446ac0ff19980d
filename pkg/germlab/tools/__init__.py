"""Tools exposed over MCP."""
