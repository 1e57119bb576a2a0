import typing

import seizure.exceptions


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "CloneableCollection"
]


class CloneableCollection(object):
    """
    An abstract collection, holding its contents in a `data` attribute (the
    channels of a `Record`, the feature matrix of a `Dataset`), that can be
    cloned with new data while keeping all of its metadata.
    """

    # noinspection PyMethodMayBeStatic
    def _validate_newdata(self, newdata: typing.Any = None) -> bool:
        """
        Returns `True` if the provided `newdata` is acceptable as the contents
        of the collection. Subclasses check shapes against their metadata.
        """
        return newdata is not None

    def _prepare_newdata(self, newdata: typing.Any) -> typing.Any:
        """
        Returns `newdata` in the form stored in the `data` attribute (for
        instance, a read-only array). Identity by default.
        """
        return newdata

    def clone(self, newdata: typing.Any = None, **kwargs):
        """
        Returns a clone of the current collection, holding `newdata`; any
        other attribute can be overridden by a keyword argument of the same
        name.
        """

        if not hasattr(self, "data"):
            raise seizure.exceptions.SeizureTypeError(
                "for a class to be a `CloneableCollection`, it must at "
                "least have a `data` attribute"
            )

        if "data" in kwargs:
            raise seizure.exceptions.SeizureValueError(
                "use the `newdata` keyword to override existing data (that "
                "way the data is validated, unlike all other overrides)"
            )

        unknown = set(kwargs) - set(self.__dict__)
        if unknown:
            raise seizure.exceptions.SeizureKeyError(
                "cannot override unknown attributes: {}".format(sorted(unknown)))

        inst = self.__class__.__new__(self.__class__)

        for key, value in self.__dict__.items():
            if key != "data":
                inst.__dict__[key] = kwargs.get(key, value)

        if not inst._validate_newdata(newdata=newdata):
            raise seizure.exceptions.SeizureValueError(
                "`newdata` failed internal validation")

        # avoid triggering descriptors
        inst.__dict__["data"] = inst._prepare_newdata(newdata)

        return inst
