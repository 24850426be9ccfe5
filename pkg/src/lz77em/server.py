"""FastMCP server exposing the lz77em commands as tools."""

from mcp.server.fastmcp import FastMCP

from lz77em.tools import bench, codec, decode

# Create FastMCP server
mcp = FastMCP("lz77em")


# Register tools from modules
codec.register(mcp)
decode.register(mcp)
bench.register(mcp)


def main():
    """Run the MCP server."""
    mcp.run()


if __name__ == "__main__":
    main()
