"""proofdock: asynchronous proof-document protocol stack.

Markup trees with a two-control-byte transfer syntax, typed codec
combinators, length-prefixed chunk transport over fifos or sockets, a
versioned document model with asynchronous execution, and a Coq-like
lexical-analysis payload.
"""

__version__ = "0.1.0"
