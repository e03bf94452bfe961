import six

from ..errors import ValidationError
from .fields import Field, TypedList


class MetaModel(type):
    """The metaclass for :class:`~spinpath.schema.Model`.

    Field attributes are moved into the ordered ``_clsfields`` mapping on the
    class, parents first, in declaration order. Each field learns its
    attribute name so conversion errors can name it.
    """
    def __new__(cls, name, bases, attrs):
        fields = {}
        for base in bases[::-1]:
            if hasattr(base, '_clsfields'):
                fields.update(base._clsfields)

        # Create the class first, otherwise the docstring is lost.
        newclass = super(MetaModel, cls).__new__(cls, name, bases, attrs)

        for key, value in list(attrs.items()):
            if isinstance(value, Field):
                value.name = key
                fields[key] = value
                delattr(newclass, key)

        newclass._clsfields = fields
        return newclass


@six.add_metaclass(MetaModel)
class Model(object):
    """Declarative record with converting, validating fields.

    Subclass ``Model`` and declare :class:`~spinpath.schema.Field`
    attributes. Values assigned to those attributes pass through the field's
    conversion, so a record built from text holds native values. ::

        >>> from spinpath import schema
        >>> class Setting(schema.Model):
        ...     delta = schema.AngleField(default=0.0)
        ...     seconds = schema.FloatField(minimum=0.0)
        >>> setting = Setting({'delta': '90deg', 'seconds': '40'})
        >>> round(setting.delta, 6), setting.seconds
        (1.570796, 40.0)
        >>> setting.to_serial()['seconds']
        40.0

    Subclasses may set ``frozen = True`` to reject assignment after
    construction, and may override :meth:`validate` for checks that span
    several fields.
    """
    frozen = False

    def __init__(self, *args, **kwargs):
        super(Model, self).__init__()
        # _instance_fields must exist before our own __setattr__ runs,
        # since it calls get_field().
        object.__setattr__(self, '_instance_fields', {})
        object.__setattr__(self, '_sealed', False)
        for name, field in self.get_all_fields().items():
            if field.has_default():
                setattr(self, name, field.get_default())
        if args:
            self.update(args[0])
        if kwargs:
            self.update(kwargs)
        for name, field in self.get_all_fields().items():
            if field.required and getattr(self, name, None) is None:
                raise ValidationError(name, 'is required')
        self.validate()
        if self.frozen:
            for value in self.to_dict().values():
                if isinstance(value, TypedList):
                    value.freeze()
        object.__setattr__(self, '_sealed', True)

    def __setattr__(self, key, value):
        if self.frozen and self._sealed:
            raise AttributeError(
                '{0} is immutable'.format(self.__class__.__name__))
        field = self.get_field(key)
        if field:
            value = field.convert(value)
        super(Model, self).__setattr__(key, value)

    def __eq__(self, other):
        if other.__class__ is not self.__class__:
            return NotImplemented
        return self.to_serial() == other.to_serial()

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __repr__(self):
        body = ', '.join('{0}={1!r}'.format(key, value)
                         for key, value in self.to_dict().items())
        return '{0}({1})'.format(self.__class__.__name__, body)

    def validate(self):
        """Hook for checks spanning several fields.

        Called once at the end of construction. Raise
        :class:`~spinpath.errors.ValidationError` naming the field at fault.
        """

    @classmethod
    def get_class_field(cls, name):
        """Return the Field instance for the class field of the given name.

        Returns None if there is no Field by that name on the class.
        """
        return cls._clsfields.get(name, None)

    @classmethod
    def get_class_fields(cls):
        """Return the ordered mapping of Fields on this class, keyed by name."""
        return cls._clsfields

    @classmethod
    def add_class_field(cls, name, field):
        """Extend a class by adding a new field to the class definition."""
        if not isinstance(field, Field):
            msg = "Second argument to add_class_field must be a Field instance"
            raise TypeError(msg)
        field.name = name
        cls._clsfields[name] = field

    @classmethod
    def from_serial(cls, data):
        """Build an instance from the output of :meth:`to_serial`."""
        return cls(data)

    def get_field(self, name):
        """Return the Field instance for the given name on this object.

        This instance method searches both the instance and the class.
        """
        field = self._instance_fields.get(name, None)
        if not field:
            field = self.__class__.get_class_field(name)
        return field

    def get_all_fields(self):
        """Return a mapping of all Fields on this instance, keyed by name.

        Includes both class fields and instance fields.
        """
        fields = dict(self.__class__.get_class_fields())
        fields.update(self._instance_fields)
        return fields

    def update(self, *args, **kwargs):
        """As with :meth:`dict.update`, set the attributes named by the keys
        of a mapping and/or keyword arguments. Keys that are not fields are
        ignored.
        """
        data = args[0] if args else {}
        for name in self.get_all_fields():
            if name in kwargs:
                setattr(self, name, kwargs[name])
            elif name in data:
                setattr(self, name, data[name])

    def replace(self, **changes):
        """Return a copy with some fields changed. Works on frozen records."""
        data = self.to_dict()
        data.update(changes)
        return self.__class__(data)

    def add_field(self, name, field):
        """Add an instance field to this Model instance.

        The current value of the attribute, if any, is converted by the new
        field and must be valid for it.
        """
        field.name = name
        self._instance_fields[name] = field
        if hasattr(self, name):
            setattr(self, name, getattr(self, name))

    def to_dict(self, serial=False):
        """Return a dictionary of the field values, in field order.

        Values are native Python objects (numpy arrays, nested models).
        Pass ``serial=True``, or call :meth:`to_serial`, for plain values.
        Attributes that are not fields are left out.
        """
        fields = self.get_all_fields()
        if serial:
            return dict((key, field.to_serial(getattr(self, key)))
                        for key, field in fields.items() if hasattr(self, key))
        return dict((key, getattr(self, key))
                    for key in fields if hasattr(self, key))

    def to_serial(self):
        """Return a dictionary of plain values (str, float, int, bool,
        lists and dicts of those), safe for :func:`json.dumps` and for the
        key-value text format.
        """
        return self.to_dict(serial=True)
