"""Small fixed trees used in the docs, the CLI demo and the tests."""

from tedst.io import parse_bracket, parse_conll

# Two 7-node trees whose node-level distance is 6 under unit costs.
WORKED_T1 = "a(b(e,f),c(g),d)"
WORKED_T2 = "a(c(g),d(x(y,z)))"

# "John played in the park" vs "John played": the premise carries a
# prepositional modifier subtree that the hypothesis lacks.
MODIFIER_PREMISE = """\
1\tJohn\tjohn\tNNP\tNNP\t_\t2\tSBJ
2\tplayed\tplay\tVBD\tVBD\t_\t0\tROOT
3\tin\tin\tIN\tIN\t_\t2\tMOD
4\tthe\tthe\tDT\tDT\t_\t3\tDET
5\tpark\tpark\tNN\tNN\t_\t3\tOBJ
"""

MODIFIER_HYPOTHESIS = """\
1\tJohn\tjohn\tNNP\tNNP\t_\t2\tSBJ
2\tplayed\tplay\tVBD\tVBD\t_\t0\tROOT
"""

MODIFIER_STOPWORDS = ("the",)


def worked_trees():
    return parse_bracket(WORKED_T1), parse_bracket(WORKED_T2)


def modifier_pair():
    return parse_conll(MODIFIER_PREMISE)[0], parse_conll(MODIFIER_HYPOTHESIS)[0]
