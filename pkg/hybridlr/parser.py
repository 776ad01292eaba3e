#!/usr/bin/python
# hybridlr configuration lexer, pipeline hooks and error types
# Started: Oct 2026
#
# The config file is a flat key-value document:
#
#     # HMEQ replication
#     input      = hmeq.csv
#     target     = BAD
#     sentinels  = ?, NA, "."
#     categorical = REASON, JOB
#     map.JOB    = Other:0, Office:1, Mgr:2
#
# It is tokenised with ply.lex and the token stream walked by hand.

from __future__ import print_function, absolute_import, division

import sys, logging

from ply import lex

log = logging.getLogger(__name__)

# -----------------------------------------------------------------------------
# Error types
#
# Every error carries the process exit code the command line front end uses.
# -----------------------------------------------------------------------------

class HybridError(Exception):
    """Base of all errors raised by hybridlr"""
    exit_code = 3

class ConfigError(HybridError):
    """Invalid configuration value, raised at validation"""
    exit_code = 1
    def __init__(self, field, msg, line=None, source="config"):
        self.field = field
        self.line = line
        where = source if line is None else "%s:%d" % (source, line)
        super(ConfigError, self).__init__("%s: field '%s': %s" % (where, field, msg))

class DataError(HybridError):
    exit_code = 2

class ModelingError(HybridError):
    exit_code = 3

class MissingTargetColumn(DataError): pass
class NonBinaryTarget(DataError): pass
class EmptyFile(DataError): pass
class UnknownVariable(DataError): pass
class SchemaMismatch(DataError): pass
class DegenerateStratum(DataError): pass
class LengthMismatch(DataError): pass
class SingleClass(DataError): pass
class ColumnMismatch(DataError): pass
class AllMissingColumn(DataError): pass
class ConstantColumn(DataError): pass
class ZeroVarianceColumn(DataError): pass
class SingleRow(DataError): pass

class SingularInformation(ModelingError): pass
class EmptyDesign(ModelingError): pass
class NoCandidates(ModelingError): pass
class EmptyAfterPruning(ModelingError): pass
class AllNetsDiverged(ModelingError): pass
class NonFiniteLoss(ModelingError): pass
class TooFewVariables(ModelingError): pass

# -----------------------------------------------------------------------------
# Config file lexer definitions
# -----------------------------------------------------------------------------

tokens = (
   'CFG_WORD', 'CFG_STRING', 'CFG_EQUALS', 'CFG_COMMA', 'CFG_COLON', 'CFG_NEWLINE',
)

t_ignore = ' \t\r'

t_CFG_EQUALS = r'='
t_CFG_COMMA = r','
t_CFG_COLON = r':'

def t_ignore_CFG_COMMENT(t):
    r'\#[^\n]*'
    return None

def t_CFG_NEWLINE(t):
    r'\n+'
    t.lexer.lineno += len(t.value)
    return t

def t_CFG_STRING(t):
    r'"([^"\\\n]|\\.)*"'
    t.value = t.value[1:-1].replace('\\"', '"').replace('\\\\', '\\')
    return t

_COLON = object()

# Bare words cover names, numbers, paths and sentinel tokens like ? or .
def t_CFG_WORD(t):
    r'[^\s=,:"\#]+'
    return t

def t_error(t):
    t.type = 'CFG_ERROR'
    t.value = t.value[0]
    t.lexer.skip(1)
    return t

def default_lexer():
    return lex.lex(optimize=0, errorlog=lex.NullLogger())

# ------------------------------------------------------------------
# ConfigEntry object
#
#    .key     - Key as written (string)
#    .values  - List of values; plain strings, or (key, value) tuples
#               for colon pairs such as Mgr:2
#    .lineno  - Line the entry started on
# ------------------------------------------------------------------

class ConfigEntry(object):
    def __init__(self, key, values, lineno):
        self.key = key
        self.values = values
        self.lineno = lineno
    def __repr__(self):
        return "%s@%d=%r" % (self.key, self.lineno, self.values)

def parse_config(text, lexer=None):
    """Parse config text into an ordered list of ConfigEntry.

    >>> [e.values for e in parse_config('sentinels = ?, "."  # junk')]
    [['?', '.']]
    >>> parse_config('map.JOB = Mgr:2, Other:0')[0].values
    [('Mgr', '2'), ('Other', '0')]
    >>> parse_config('a = 1\\n\\n b = 2')[1].lineno
    3
    >>> parse_config('label.JOB = Job   category')[0].values
    ['Job category']
    """
    if lexer is None:
        lexer = default_lexer()
    lexer.lineno = 1
    lexer.input(text)
    lines = []
    current = []
    while True:
        tok = lexer.token()
        if not tok:
            break
        if tok.type == 'CFG_NEWLINE':
            if current:
                lines.append(current)
            current = []
            continue
        current.append(tok)
    if current:
        lines.append(current)

    entries = []
    for toks in lines:
        lineno = toks[0].lineno
        bad = [tok for tok in toks if tok.type == 'CFG_ERROR']
        if bad:
            raise ConfigError('?', "unexpected character %r" % bad[0].value, lineno)
        if len(toks) < 2 or toks[0].type != 'CFG_WORD' or toks[1].type != 'CFG_EQUALS':
            raise ConfigError(toks[0].value, "expected 'key = value'", lineno)
        values = []
        item = []
        for tok in toks[2:] + [None]:
            if tok is None or tok.type == 'CFG_COMMA':
                if not item:
                    if tok is None and not values:
                        break
                    raise ConfigError(toks[0].value, "empty list item", lineno)
                colons = [i for i, x in enumerate(item) if x is _COLON]
                if not colons:
                    values.append(' '.join(item))
                elif len(colons) == 1 and 0 < colons[0] < len(item) - 1:
                    values.append((' '.join(item[:colons[0]]), ' '.join(item[colons[0] + 1:])))
                else:
                    raise ConfigError(toks[0].value, "malformed value", lineno)
                item = []
            elif tok.type == 'CFG_COLON':
                item.append(_COLON)
            elif tok.type == 'CFG_EQUALS':
                raise ConfigError(toks[0].value, "unexpected '='", lineno)
            else:
                item.append(tok.value)
        entries.append(ConfigEntry(toks[0].value, values, lineno))
    return entries

# ------------------------------------------------------------------
# Pipeline event hooks
#
# Override these to customise how the pipeline reports what it does
# ------------------------------------------------------------------

class PipelineHooks(object):
    """Override these in your subclass of Pipeline to customise reporting"""
    def __init__(self):
        self.return_code = 0
        self.warnings = []

    def on_warning(self,where,msg):
        """Called when the pipeline drops something or falls back, e.g. a constant
        column, a diverged network or a quasi-separated pair.

        The default prints to stderr and remembers the message in ``self.warnings``.
        """
        self.warnings.append((where, msg))
        log.info("warning: %s: %s", where, msg)
        print("%s: warning: %s" % (where, msg), file = sys.stderr)

    def on_error(self,where,msg):
        """Called when a phase failed. The default prints to stderr and increments
        the return code.
        """
        log.info("error: %s: %s", where, msg)
        print("%s: error: %s" % (where, msg), file = sys.stderr)
        self.return_code += 1

    def on_progress(self,phase,done,total):
        """Called as a phase makes progress. The default logs at debug level."""
        log.debug("%s: %d/%d", phase, done, total)
