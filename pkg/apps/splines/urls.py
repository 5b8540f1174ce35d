from django.urls import path
from . import views

urlpatterns = [
    path('knots/', views.KnotPlacementView.as_view(), name='knot-placement'),
    path('knots/validate/', views.KnotValidationView.as_view(), name='knot-validation'),
    path('penalty/', views.PenaltyView.as_view(), name='penalty-matrices'),
]
