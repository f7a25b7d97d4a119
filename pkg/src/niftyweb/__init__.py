"""niftyweb: serve any text-based program as a simple web app.

A query goes in over HTTP, a ranked list of text results comes back as
JSON.  Built-in kernels cover weighted autocomplete, letter inventories,
and random sentence generation; arbitrary console programs are wrapped
via the subprocess adapter.  No third-party runtime dependencies.
"""

__version__ = "0.1.0"
