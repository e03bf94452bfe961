# -*- coding: utf-8 -*-
#
# spinpath documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

from spinpath import __version__  # noqa: E402

# -- General configuration ----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.intersphinx',
              'sphinx.ext.mathjax', 'sphinx.ext.viewcode']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'spinpath'
copyright = "2026 the spinpath contributors"

version = '.'.join(__version__.split('.')[:2])
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output --------------------------------------------------

html_theme = 'default'
htmlhelp_basename = 'spinpathdoc'

# -- Options for manual page output -------------------------------------------

man_pages = [
    ('cli', 'spinpath', u'spinpath command line', [u'spinpath contributors'], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
