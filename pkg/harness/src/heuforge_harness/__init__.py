"""Guest-side execution shim.

Reads newline-delimited JSON requests on stdin, compiles each candidate's
source in a fresh namespace (cached by code hash), drives it through the
constructive or online evaluation loop for the requested problem, and writes
exactly one response line per request.  Nothing but protocol lines ever goes
to stdout; diagnostics go to stderr.
"""

__version__ = "0.1.0"
