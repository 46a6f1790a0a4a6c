"""
Static tables for mutseed: mutation schemes, default security operator,
lifecycle ordering and the leak-label grammar.
"""

import re
from enum import Enum


class OperatorType(str, Enum):
    """Mutation scheme selected by the ``operatorType`` setting."""

    REACHABILITY = "REACHABILITY"
    COMPLEXREACHABILITY = "COMPLEXREACHABILITY"
    TAINTSINK = "TAINTSINK"
    SCOPESINK = "SCOPESINK"


# Default security operator: Calendar time zone name leaked to the device log
DEFAULT_VAR_DECL = "String dl##"
DEFAULT_SOURCE = "java.util.Calendar.getInstance().getTimeZone().getDisplayName()"
DEFAULT_SINK = 'android.util.Log.d("leak-##", dl##);'

PLACEHOLDER = "##"
LABEL_PLACEHOLDER = "leak-##"

# Happens-before rank of activity callbacks
DEFAULT_LIFECYCLE_ORDER = ["onCreate", "onStart", "onResume", "onPause", "onStop", "onDestroy"]

LEAK_LABEL_PATTERN = re.compile(r"leak-(\d+)(?:-(\d+))?")
MUTATION_ID_PATTERN = re.compile(r"mutation-(\d+)-(\d+)")

SOURCE_EXTENSION = ".java"
SKIPPED_DIRECTORIES = {"build", "gen", ".git"}

CLASS_BODY_MARKER = "<class-body>"

# Setting keys as they appear in the properties file
REQUIRED_KEYS = ["lib4ast", "appSrc", "appName", "output", "operatorType"]
OPTIONAL_KEYS = ["varDec", "source", "sink", "lifecycle", "compilerCmd"]
THROWS_KEY_PREFIX = "throws."

SCHEME_DESCRIPTIONS = {
    OperatorType.REACHABILITY: {
        "title": "Reachability",
        "placement": "every method body, anonymous-class method body and class body",
        "labels": "leak-<i>",
    },
    OperatorType.COMPLEXREACHABILITY: {
        "title": "Complex-Reachability",
        "placement": "every method body, with an array hop between source and sink",
        "labels": "leak-<i>",
    },
    OperatorType.TAINTSINK: {
        "title": "TaintSink",
        "placement": "source in an earlier lifecycle callback, sink in a later one",
        "labels": "leak-<i>",
    },
    OperatorType.SCOPESINK: {
        "title": "ScopeSink",
        "placement": "field in the outermost class, source in a nested method, sinks in every ancestor method",
        "labels": "leak-<i>-<j>",
    },
}
