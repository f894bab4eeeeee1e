# treembed, probabilistic tree embeddings and distance oracles
# Copyright (C) 2026  treembed authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
HTML pages for oracles and stretch reports, rendered from the jinja2 files
under ``templates/``.
"""

import os
from abc import ABC, abstractmethod

import jinja2

__templates__ = jinja2.Environment(loader=jinja2.FileSystemLoader(
    os.path.join(os.path.dirname(__file__), 'templates')), autoescape=True)


def render(name, **context):
    return __templates__.get_template(name).render(context)


class Renderable(ABC):
    """
    ``template`` names the page; ``context()`` fills it.
    """
    template = None

    def to_html(self):
        return render(self.template, **self.context())

    @abstractmethod
    def context(self):
        pass

    @abstractmethod
    def empty(self):
        pass
