"""IRI constants for the FAIR Digital Object ontology and common RDF vocabularies."""

from __future__ import annotations

FDOF_NS = "https://w3id.org/fdof/ontology#"

# Classes
FAIR_DIGITAL_OBJECT = FDOF_NS + "FAIRDigitalObject"
FAIR_DIGITAL_INFORMATION_OBJECT = FDOF_NS + "FAIRDigitalInformationObject"
FAIR_DIGITAL_MEDIA_OBJECT = FDOF_NS + "FAIRDigitalMediaObject"
FAIR_METADATA_RECORD = FDOF_NS + "FAIRMetadataRecord"
IDENTIFIER_CLASS = FDOF_NS + "Identifier"

# Properties
GUPRI = FDOF_NS + "gupri"
IS_IDENTIFIED_BY = FDOF_NS + "isIdentifiedBy"
IS_METADATA_OF = FDOF_NS + "isMetadataOf"
IS_MATERIALIZED_BY = FDOF_NS + "isMaterializedBy"
HAS_ENCODING_FORMAT = FDOF_NS + "hasEncodingFormat"
HAS_INFORMATION_OBJECT_TYPE = FDOF_NS + "hasInformationObjectType"

FDOF_CLASSES = frozenset(
    {
        FAIR_DIGITAL_OBJECT,
        FAIR_DIGITAL_INFORMATION_OBJECT,
        FAIR_DIGITAL_MEDIA_OBJECT,
        FAIR_METADATA_RECORD,
        IDENTIFIER_CLASS,
    }
)

FDOF_PROPERTIES = frozenset(
    {
        GUPRI,
        IS_IDENTIFIED_BY,
        IS_METADATA_OF,
        IS_MATERIALIZED_BY,
        HAS_ENCODING_FORMAT,
        HAS_INFORMATION_OBJECT_TYPE,
    }
)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RDF_TYPE = RDF_NS + "type"
RDF_LANG_STRING = RDF_NS + "langString"
RDFS_SUBCLASS_OF = RDFS_NS + "subClassOf"
XSD_STRING = XSD_NS + "string"
