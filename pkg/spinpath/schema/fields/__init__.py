from .basic import Field, NOT_SET, AngleField, BooleanField, CharField,\
    ChoiceField, CountField, FloatField, IntegerField, SignField

from .complex import ArrayField, ComplexVectorField, DictField, ListField, ModelField,\
    TypedList

# flake8: noqa
