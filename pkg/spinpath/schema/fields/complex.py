from collections.abc import MutableSequence

import numpy as np
import six

from ...errors import ValidationError
from .basic import Field


class TypedList(MutableSequence):
    """A list whose items always pass through an item field.

    A frozen record calls :meth:`freeze` on its lists once it is built;
    after that every mutation raises ``TypeError``.
    """

    def __init__(self, field, *args):
        super(TypedList, self).__init__()
        self._field = field
        self._list = [self._convert(item) for item in list(*args)]
        self._frozen = False

    def _convert(self, item):
        try:
            return self._field.to_python(item)
        except (TypeError, ValueError) as exc:
            raise ValidationError(None, 'item {0!r}: {1}'.format(item, exc))

    def _check_mutable(self):
        if self._frozen:
            raise TypeError('list belongs to an immutable record')

    def freeze(self):
        self._frozen = True

    def __getitem__(self, index):
        return self._list[index]

    def __setitem__(self, index, value):
        self._check_mutable()
        self._list[index] = self._convert(value)

    def __delitem__(self, index):
        self._check_mutable()
        del self._list[index]

    def __len__(self):
        return len(self._list)

    def insert(self, index, value):
        self._check_mutable()
        self._list.insert(index, self._convert(value))

    # not abstract, but comparisons fail if not done
    def __eq__(self, other):
        if isinstance(other, TypedList):
            other = other._list
        return self._list == other

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return repr(self._list)


class ListField(Field):
    """A ListField holds a sequence of values.

    Strings are split on commas, so ``"0, 30deg, 60deg"`` from a config file
    becomes a three-item list; an empty string is an empty list. A
    non-iterable scalar becomes a single-item list, None an empty list.

    Pass ``of_type`` (a :class:`~spinpath.schema.Field` instance) to convert
    and serialise the items::

        >>> from spinpath import schema
        >>> class Scan(schema.Model):
        ...     deltas = schema.ListField(of_type=schema.AngleField())
        >>> [round(d, 4) for d in Scan(deltas='0, 90deg, 180deg').deltas]
        [0.0, 1.5708, 3.1416]
    """
    def __init__(self, of_type=None, **kwargs):
        super(ListField, self).__init__(**kwargs)
        self._itemfield = of_type if isinstance(of_type, Field) else Field()

    def to_python(self, data):
        if isinstance(data, TypedList):
            result = list(data)
        elif isinstance(data, six.string_types):
            result = [item.strip() for item in data.split(',')]
            if result == ['']:
                result = []
        elif isinstance(data, dict):
            result = [data]
        elif hasattr(data, '__iter__'):
            result = list(data)
        elif data is None:
            result = []
        else:
            result = [data]
        return TypedList(self._itemfield, result)

    def to_serial(self, items):
        return [self._itemfield.to_serial(item) for item in items]


class DictField(Field):
    """DictField only accepts values that are dictionaries.

    No conversion is applied to keys or values; use a
    :class:`~spinpath.schema.ModelField` for structured content.
    """

    def to_python(self, data):
        if data is None:
            return {}
        return dict(data)


class ModelField(Field):
    """Field containing a nested model instance.

    Takes the nested :class:`~spinpath.schema.Model` class. Dictionaries are
    converted into that class; instances are kept as they are.
    """
    def __init__(self, wrapped_class, **kwargs):
        self._wrapped_class = wrapped_class
        super(ModelField, self).__init__(**kwargs)

    def to_python(self, data):
        if isinstance(data, self._wrapped_class) or data is None:
            return data
        return self._wrapped_class(data)

    def to_serial(self, model_instance):
        if model_instance is None:
            return None
        return model_instance.to_serial()


class ComplexVectorField(Field):
    """A read-only complex numpy vector of fixed length.

    Serialises as a list of ``[real, imag]`` pairs, and accepts that form
    back as well as any sequence of numbers.
    """
    def __init__(self, length, **kwargs):
        super(ComplexVectorField, self).__init__(**kwargs)
        self.length = length

    def to_python(self, data):
        if data is None:
            data = np.zeros(self.length)
        array = np.asarray(data)
        if array.ndim == 2 and array.shape[1] == 2 and not np.iscomplexobj(array):
            array = array[:, 0] + 1j * array[:, 1]
        vector = np.array(array, dtype=complex).reshape(-1)
        if vector.shape != (self.length,):
            raise ValidationError(None, 'expected {0} components, got {1}'.format(
                self.length, vector.size))
        vector.setflags(write=False)
        return vector

    def to_serial(self, vector):
        return [[float(z.real), float(z.imag)] for z in vector]


class ArrayField(Field):
    """A read-only float numpy array of fixed shape.

    Serialises as nested lists.
    """
    def __init__(self, shape, **kwargs):
        super(ArrayField, self).__init__(**kwargs)
        self.shape = tuple(shape)

    def to_python(self, data):
        if data is None:
            data = np.zeros(self.shape)
        array = np.array(data, dtype=float)
        if array.shape != self.shape:
            raise ValidationError(None, 'expected shape {0}, got {1}'.format(
                self.shape, array.shape))
        array.setflags(write=False)
        return array

    def to_serial(self, array):
        return array.tolist()
