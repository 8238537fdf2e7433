import doctest

import pytest

from gradedq import algebra, apath, complexes, extensions, lattice, nq, sigma
from gradedq.language import checks, parser, report


@pytest.mark.parametrize('module', [algebra, nq, sigma, extensions, apath, complexes, lattice,
                                    parser, report, checks])
def test_module_doctests(module):
    failed, attempted = doctest.testmod(module)
    assert attempted
    assert not failed
