from .models import Model
from .fields import Field, NOT_SET, AngleField, BooleanField, CharField,\
    ChoiceField, CountField, FloatField, IntegerField, SignField,\
    ArrayField, ComplexVectorField, DictField, ListField, ModelField, TypedList
from .keyvalue import dump, dumps, load, loads

# flake8: noqa
