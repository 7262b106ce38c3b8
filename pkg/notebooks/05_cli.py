# coding: utf-8

# # Driving the command line from Python
#
# Every subcommand writes JSON to stdout, so results can be piped or parsed.

# In[1]:

import contextlib
import io
import json

from lidstone.cli import main


def run(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, json.loads(buf.getvalue()) if buf.getvalue() else None


# In[2]:

code, doc = run("basis", "-n", "2", "-t", "2,0", "-i", "1")
print(code, doc["degree"], doc["terms"])


# In[3]:

code, doc = run("verify", "--example", "1", "-n", "2", "--a", "0,0", "--b", "1,1", "--max-norm", "4")
print(code, doc["pass"])


# In[4]:

code, doc = run("threshold", "--A", "1", "--eta", "0.1")
print(code, doc)
